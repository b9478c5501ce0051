#include "frqi/transpiler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "frqi/errors.hpp"
#include "frqi/frqi_builder.hpp"

namespace frqi {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAngleEps = 1e-15;

void emit_rz(Circuit& out, double angle, uint32_t q) {
  if (std::abs(angle) > kAngleEps) out.rz(angle, q);
}

// Ry(theta) up to global phase: Rz(-pi), SX, Rz(pi - theta), SX in time order.
void emit_ry(Circuit& out, double theta, uint32_t q) {
  out.rz(-kPi, q);
  out.sx(q);
  out.rz(kPi - theta, q);
  out.sx(q);
}

// U3(theta, phi, lambda) = Rz(phi) Ry(theta) Rz(lambda) up to global phase.
void emit_u3(Circuit& out, double theta, double phi, double lambda, uint32_t q) {
  if (std::abs(theta) <= kAngleEps) {
    emit_rz(out, phi + lambda, q);
    return;
  }
  emit_rz(out, lambda - kPi, q);
  out.sx(q);
  out.rz(kPi - theta, q);
  out.sx(q);
  emit_rz(out, phi, q);
}

void emit_h(Circuit& out, uint32_t q) {
  out.rz(kPi / 2.0, q);
  out.sx(q);
  out.rz(kPi / 2.0, q);
}

void emit_cu(Circuit& out, const CuParams& p, uint32_t control, uint32_t target) {
  emit_rz(out, p.gamma + (p.lambda + p.phi) / 2.0, control);
  emit_rz(out, (p.lambda - p.phi) / 2.0, target);
  out.cx(control, target);
  emit_u3(out, -p.theta / 2.0, 0.0, -(p.phi + p.lambda) / 2.0, target);
  out.cx(control, target);
  emit_u3(out, p.theta / 2.0, p.phi, 0.0, target);
}

// Controlled Ry: Ry(theta/2), CX, Ry(-theta/2), CX in time order.
void emit_cry(Circuit& out, double theta, uint32_t control, uint32_t target) {
  emit_ry(out, theta / 2.0, target);
  out.cx(control, target);
  emit_ry(out, -theta / 2.0, target);
  out.cx(control, target);
}

void lower_gate(Circuit& out, const Circuit::Gate& g);

void lower_into(Circuit& out, const Circuit& decomposition, std::span<const uint32_t> wires) {
  for (size_t i = 0; i < decomposition.size(); ++i) {
    Circuit::Gate g = decomposition.gate(i);
    std::vector<uint32_t> mapped;
    mapped.reserve(g.qubits.size());
    for (uint32_t q : g.qubits) mapped.push_back(wires[q]);
    Circuit::Gate remapped = g;
    remapped.qubits = std::span<const uint32_t>(mapped.data(), mapped.size());
    lower_gate(out, remapped);
  }
}

void lower_mcry(Circuit& out, const Circuit::Gate& g) {
  const size_t num_controls = g.qubits.size() - 1;
  const uint32_t target = g.qubits.back();
  if (num_controls == 1) {
    emit_cry(out, g.angle, g.qubits[0], target);
    return;
  }
  if (num_controls == 2) {
    // Two CX and three controlled-U rotations.
    const uint32_t c0 = g.qubits[0], c1 = g.qubits[1];
    emit_cu(out, {g.angle / 2.0, 0, 0, 0}, c1, target);
    out.cx(c0, c1);
    emit_cu(out, {-g.angle / 2.0, 0, 0, 0}, c1, target);
    out.cx(c0, c1);
    emit_cu(out, {g.angle / 2.0, 0, 0, 0}, c0, target);
    return;
  }
  // Gray-code multiplexor; exact and 2^k CX for k controls.
  Circuit ladder(out.num_qubits());
  emit_selector_rotation(ladder, 'y', g.angle, g.qubits.first(num_controls), target);
  for (size_t i = 0; i < ladder.size(); ++i) lower_gate(out, ladder.gate(i));
}

void lower_gate(Circuit& out, const Circuit::Gate& g) {
  switch (g.kind) {
    case GateKind::I:
    case GateKind::X:
    case GateKind::SX:
    case GateKind::Rz:
    case GateKind::CX:
      out.add(g.kind, g.qubits, g.angle);
      break;
    case GateKind::H:
      emit_h(out, g.qubits[0]);
      break;
    case GateKind::Ry:
      emit_ry(out, g.angle, g.qubits[0]);
      break;
    case GateKind::SWAP:
      out.cx(g.qubits[0], g.qubits[1]);
      out.cx(g.qubits[1], g.qubits[0]);
      out.cx(g.qubits[0], g.qubits[1]);
      break;
    case GateKind::CU:
      emit_cu(out, *g.cu, g.qubits[0], g.qubits[1]);
      break;
    case GateKind::MCRY:
      lower_mcry(out, g);
      break;
    case GateKind::MARY:
      lower_into(out, decompose_mary(static_cast<uint32_t>(g.qubits.size()), g.angle), g.qubits);
      break;
    case GateKind::RCCX:
      lower_into(out, decompose_rccx(), g.qubits);
      break;
    case GateKind::RCCCX:
      lower_into(out, decompose_rcccx(), g.qubits);
      break;
    default:
      throw FrqiError(errc::unknown_gate_kind, "cannot lower gate");
  }
}

uint64_t estimate_gate(GateKind kind, size_t num_qubits) {
  switch (kind) {
    case GateKind::I:
    case GateKind::X:
    case GateKind::SX:
    case GateKind::Rz:
    case GateKind::CX:
      return 1;
    case GateKind::H:
      return 3;
    case GateKind::Ry:
      return 4;
    case GateKind::SWAP:
      return 3;
    case GateKind::CU:
      return 14;
    case GateKind::MCRY: {
      const size_t k = num_qubits - 1;
      if (k == 1) return 10;
      if (k == 2) return 2 + 3 * 14;
      if (k >= 63) return UINT64_MAX / 2;
      return (uint64_t{1} << k) * 5;
    }
    case GateKind::MARY: {
      // wing (2 CX + 4 Ry lowered) + ladder slots + line gates
      static const std::map<size_t, uint64_t> table = [] {
        std::map<size_t, uint64_t> t;
        for (uint32_t arity : {3u, 5u, 7u, 8u, 9u, 10u}) {
          const Circuit d = decompose_mary(arity, 1.0);
          uint64_t total = 0;
          for (size_t i = 0; i < d.size(); ++i) {
            const auto g = d.gate(i);
            total += estimate_gate(g.kind, g.qubits.size());
          }
          t[arity] = total;
        }
        return t;
      }();
      return table.at(num_qubits);
    }
    case GateKind::RCCX:
      return 3 + 4 * 4;
    case GateKind::RCCCX:
      return 6 + 4 * 3 + 8;
  }
  return 1;
}

}  // namespace

bool is_basis_kind(GateKind kind) {
  return kind == GateKind::I || kind == GateKind::X || kind == GateKind::SX ||
         kind == GateKind::Rz || kind == GateKind::CX;
}

bool is_basis_circuit(const Circuit& circuit) {
  for (size_t i = 0; i < circuit.size(); ++i) {
    if (!is_basis_kind(circuit.gate(i).kind)) return false;
  }
  return true;
}

uint64_t estimate_lowered_size(const Circuit& circuit) {
  uint64_t total = 0;
  for (size_t i = 0; i < circuit.size(); ++i) {
    const auto g = circuit.gate(i);
    const uint64_t e = estimate_gate(g.kind, g.qubits.size());
    if (total > UINT64_MAX - e) return UINT64_MAX;
    total += e;
  }
  return total;
}

Circuit lower(const Circuit& circuit, const LowerOptions& options) {
  const uint64_t estimate = estimate_lowered_size(circuit);
  if (estimate > options.gate_budget) {
    throw FrqiError(errc::gate_budget_exceeded,
                    "lowering would emit about " + std::to_string(estimate) +
                        " gates, budget is " + std::to_string(options.gate_budget));
  }
  Circuit out(circuit.num_qubits());
  out.layout = circuit.layout;
  out.reserve(estimate, estimate * 2);
  for (size_t i = 0; i < circuit.size(); ++i) {
    lower_gate(out, circuit.gate(i));
  }
  return out;
}

Circuit decompose_mcry2_cu(double gamma) {
  Circuit c(3);
  c.cu({gamma / 2.0, 0, 0, 0}, 1, 2);
  c.cx(0, 1);
  c.cu({-gamma / 2.0, 0, 0, 0}, 1, 2);
  c.cx(0, 1);
  c.cu({gamma / 2.0, 0, 0, 0}, 0, 2);
  return c;
}

Circuit naive_toffoli() {
  Circuit c(3);
  const uint32_t a = 0, b = 1, t = 2;
  c.h(t);
  c.cx(b, t);
  c.rz(-kPi / 4.0, t);
  c.cx(a, t);
  c.rz(kPi / 4.0, t);
  c.cx(b, t);
  c.rz(-kPi / 4.0, t);
  c.cx(a, t);
  c.rz(kPi / 4.0, b);
  c.rz(kPi / 4.0, t);
  c.h(t);
  c.cx(a, b);
  c.rz(kPi / 4.0, a);
  c.rz(-kPi / 4.0, b);
  c.cx(a, b);
  return c;
}

Circuit naive_c3x() {
  Circuit c(4);
  c.h(3);
  for (uint32_t q = 0; q < 4; ++q) c.rz(kPi / 8.0, q);
  c.cx(0, 1);
  c.rz(-kPi / 8.0, 1);
  c.cx(0, 1);
  c.cx(1, 2);
  c.rz(-kPi / 8.0, 2);
  c.cx(0, 2);
  c.rz(kPi / 8.0, 2);
  c.cx(1, 2);
  c.rz(-kPi / 8.0, 2);
  c.cx(0, 2);
  c.cx(2, 3);
  c.rz(-kPi / 8.0, 3);
  c.cx(1, 3);
  c.rz(kPi / 8.0, 3);
  c.cx(2, 3);
  c.rz(-kPi / 8.0, 3);
  c.cx(0, 3);
  c.rz(kPi / 8.0, 3);
  c.cx(2, 3);
  c.rz(-kPi / 8.0, 3);
  c.cx(1, 3);
  c.rz(kPi / 8.0, 3);
  c.cx(2, 3);
  c.rz(-kPi / 8.0, 3);
  c.cx(0, 3);
  c.h(3);
  return c;
}

Placement Placement::fixed(std::vector<uint32_t> assignment) {
  Placement p;
  p.kind = Kind::Fixed;
  p.assignment = std::move(assignment);
  return p;
}

namespace {

struct ShortestPaths {
  std::vector<std::vector<uint32_t>> dist;
  std::vector<std::vector<uint32_t>> next_hop;  // next node from u toward v
};

ShortestPaths all_pairs(const CouplingMap& map) {
  const uint32_t n = map.num_qubits;
  const auto adj = map.adjacency();
  ShortestPaths sp;
  sp.dist.assign(n, std::vector<uint32_t>(n, UINT32_MAX));
  sp.next_hop.assign(n, std::vector<uint32_t>(n, UINT32_MAX));
  for (uint32_t src = 0; src < n; ++src) {
    std::vector<uint32_t> parent(n, UINT32_MAX);
    std::queue<uint32_t> frontier;
    sp.dist[src][src] = 0;
    frontier.push(src);
    while (!frontier.empty()) {
      const uint32_t u = frontier.front();
      frontier.pop();
      for (uint32_t v : adj[u]) {
        if (sp.dist[src][v] == UINT32_MAX) {
          sp.dist[src][v] = sp.dist[src][u] + 1;
          parent[v] = u;
          frontier.push(v);
        }
      }
    }
    // First hop from src toward every destination.
    for (uint32_t v = 0; v < n; ++v) {
      if (v == src || sp.dist[src][v] == UINT32_MAX) continue;
      uint32_t cur = v;
      while (parent[cur] != src) cur = parent[cur];
      sp.next_hop[src][v] = cur;
    }
  }
  return sp;
}

std::vector<uint32_t> auto_placement(const Circuit& circuit, const CouplingMap& map) {
  const uint32_t n_logical = circuit.num_qubits();
  const auto adj = map.adjacency();
  uint32_t anchor = 0;
  for (uint32_t v = 1; v < map.num_qubits; ++v) {
    if (adj[v].size() > adj[anchor].size()) anchor = v;
  }

  // BFS order of physical nodes starting at the anchor.
  std::vector<uint32_t> order;
  std::vector<bool> seen(map.num_qubits, false);
  std::queue<uint32_t> frontier;
  frontier.push(anchor);
  seen[anchor] = true;
  while (!frontier.empty()) {
    const uint32_t u = frontier.front();
    frontier.pop();
    order.push_back(u);
    std::vector<uint32_t> neighbors = adj[u];
    std::sort(neighbors.begin(), neighbors.end());
    for (uint32_t v : neighbors) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }

  std::vector<uint32_t> phys_of(n_logical, UINT32_MAX);
  size_t cursor = 0;
  if (circuit.layout.gray && *circuit.layout.gray < n_logical) {
    phys_of[*circuit.layout.gray] = anchor;
    cursor = 1;  // anchor is order[0]
  }
  for (uint32_t q = 0; q < n_logical; ++q) {
    if (phys_of[q] != UINT32_MAX) continue;
    phys_of[q] = order[cursor++];
  }
  return phys_of;
}

}  // namespace

RoutedCircuit route(const Circuit& circuit, const CouplingMap& map, const Placement& placement) {
  if (!is_basis_circuit(circuit)) {
    throw FrqiError(errc::bad_argument, "route expects a basis circuit; lower first");
  }
  if (map.num_qubits < circuit.num_qubits()) {
    throw FrqiError(errc::map_too_small, "coupling map has fewer qubits than the circuit");
  }
  if (!map.connected()) {
    throw FrqiError(errc::disconnected_map, "coupling map must be connected");
  }

  std::vector<uint32_t> phys_of;
  if (placement.kind == Placement::Kind::Fixed) {
    phys_of = placement.assignment;
    if (phys_of.size() != circuit.num_qubits()) {
      throw FrqiError(errc::bad_argument, "placement size must match circuit qubits");
    }
    std::vector<bool> used(map.num_qubits, false);
    for (uint32_t p : phys_of) {
      if (p >= map.num_qubits || used[p]) {
        throw FrqiError(errc::bad_argument, "placement must be injective into the map");
      }
      used[p] = true;
    }
  } else {
    phys_of = auto_placement(circuit, map);
  }

  const ShortestPaths sp = all_pairs(map);

  RoutedCircuit routed;
  routed.initial_layout = phys_of;
  routed.circuit = Circuit(map.num_qubits);

  auto emit_swap = [&](uint32_t u, uint32_t v) {
    routed.circuit.cx(u, v);
    routed.circuit.cx(v, u);
    routed.circuit.cx(u, v);
  };

  std::vector<uint32_t> log_of(map.num_qubits, UINT32_MAX);
  for (uint32_t q = 0; q < circuit.num_qubits(); ++q) log_of[phys_of[q]] = q;

  for (size_t i = 0; i < circuit.size(); ++i) {
    const Circuit::Gate g = circuit.gate(i);
    if (g.kind != GateKind::CX) {
      std::vector<uint32_t> mapped;
      for (uint32_t q : g.qubits) mapped.push_back(phys_of[q]);
      routed.circuit.add(g.kind, mapped, g.angle);
      continue;
    }
    uint32_t pa = phys_of[g.qubits[0]];
    const uint32_t pb = phys_of[g.qubits[1]];
    while (sp.dist[pa][pb] > 1) {
      const uint32_t next = sp.next_hop[pa][pb];
      emit_swap(pa, next);
      const uint32_t la = log_of[pa];
      const uint32_t lb = log_of[next];
      log_of[pa] = lb;
      log_of[next] = la;
      if (la != UINT32_MAX) phys_of[la] = next;
      if (lb != UINT32_MAX) phys_of[lb] = pa;
      pa = next;
    }
    routed.circuit.cx(pa, pb);
  }
  routed.final_layout = phys_of;
  return routed;
}

Distribution unpermute_distribution(const Distribution& physical,
                                    const std::vector<uint32_t>& final_layout,
                                    uint32_t num_logical) {
  if (final_layout.size() != num_logical || num_logical > physical.num_qubits) {
    throw FrqiError(errc::dim_mismatch, "layout does not match qubit counts");
  }
  Distribution out;
  out.num_qubits = num_logical;
  out.probs.assign(uint64_t{1} << num_logical, 0.0);
  for (uint64_t s = 0; s < physical.dim(); ++s) {
    uint64_t j = 0;
    for (uint32_t q = 0; q < num_logical; ++q) {
      j |= ((s >> final_layout[q]) & 1u) << q;
    }
    out.probs[j] += physical.probs[s];
  }
  return out;
}

Counts reduce_counts(const Counts& physical, const std::vector<uint32_t>& final_layout,
                     uint32_t num_logical) {
  if (final_layout.size() != num_logical) {
    throw FrqiError(errc::dim_mismatch, "layout does not match qubit counts");
  }
  Counts out;
  out.shots = physical.shots;
  for (const auto& [state, count] : physical.histogram) {
    uint64_t j = 0;
    for (uint32_t q = 0; q < num_logical; ++q) {
      j |= ((state >> final_layout[q]) & 1u) << q;
    }
    out.histogram[j] += count;
  }
  return out;
}

}  // namespace frqi
