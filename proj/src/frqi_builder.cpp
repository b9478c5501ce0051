#include "frqi/frqi_builder.hpp"

#include <bit>
#include <cmath>

#include "frqi/errors.hpp"

namespace frqi {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_angles(const AngleVector& angles) {
  if (angles.n < 1) {
    throw FrqiError(errc::bad_argument, "angle vector needs n >= 1");
  }
  const uint64_t expected = uint64_t{1} << (2 * angles.n);
  if (angles.thetas.size() != expected) {
    throw FrqiError(errc::bad_argument, "angle vector length must be 2^(2n)");
  }
  for (double theta : angles.thetas) {
    if (!std::isfinite(theta) || theta < 0.0 || theta > kPi / 2.0 + 1e-12) {
      throw FrqiError(errc::bad_argument, "angles must lie in [0, pi/2]");
    }
  }
}

// Controls of every MARY arity, split into the single wing control (last)
// and the ladder line groups (fastest line first, cheapest groups fastest).
struct MaryShape {
  std::vector<std::vector<uint32_t>> groups;  // indices into the control list
  uint32_t wing;
};

MaryShape mary_shape(uint32_t arity) {
  switch (arity) {
    case 5:
      return {{{0}, {1, 2}}, 3};
    case 7:
      return {{{0}, {1, 2}, {3, 4}}, 5};
    case 8:
      return {{{0}, {1, 2}, {3, 4, 5}}, 6};
    case 9:
      return {{{0}, {1, 2, 3}, {4, 5, 6}}, 7};
    case 10:
      return {{{0, 1}, {2, 3, 4}, {5, 6, 7}}, 8};
    default:
      throw FrqiError(errc::unsupported_arity, "MARY arity must be one of {3,5,7,8,9,10}");
  }
}

void emit_line_gate(Circuit& circuit, const std::vector<uint32_t>& group, uint32_t target) {
  switch (group.size()) {
    case 1:
      circuit.cx(group[0], target);
      break;
    case 2:
      circuit.rccx(group[0], group[1], target);
      break;
    case 3:
      circuit.rcccx(group[0], group[1], group[2], target);
      break;
    default:
      throw FrqiError(errc::bad_argument, "line group size must be 1..3");
  }
}

// Gray-code ladder applying R(gamma) on target iff every line group is
// all-ones. Line gates may be RCCX/RCCCX only for the 'z' axis: their
// off-branch Z residues commute with Rz and square away, while they would
// flip Ry slot signs.
void emit_group_selector(Circuit& circuit, char axis, double gamma,
                         const std::vector<std::vector<uint32_t>>& groups, uint32_t target) {
  const uint32_t m = static_cast<uint32_t>(groups.size());
  const uint64_t slots = uint64_t{1} << m;
  const double unit = gamma / static_cast<double>(slots);
  for (uint64_t i = 1; i <= slots; ++i) {
    const uint64_t gray = (i - 1) ^ ((i - 1) >> 1);
    const double angle = (std::popcount(gray) % 2 == 0) ? unit : -unit;
    if (axis == 'y') {
      circuit.ry(angle, target);
    } else {
      circuit.rz(angle, target);
    }
    const uint32_t line = i < slots ? static_cast<uint32_t>(std::countr_zero(i)) : m - 1;
    emit_line_gate(circuit, groups[line], target);
  }
}

void emit_wing(Circuit& circuit, uint32_t control, uint32_t target) {
  circuit.ry(kPi / 4.0, target);
  circuit.cx(control, target);
  circuit.ry(-kPi / 4.0, target);
}

uint64_t addressing_mask(uint64_t pixel, uint32_t num_position) {
  return pixel == 0 ? (uint64_t{1} << num_position) - 1 : (pixel - 1) ^ pixel;
}

void emit_x_mask(Circuit& circuit, uint64_t mask, uint32_t num_position) {
  for (uint32_t b = 0; b < num_position; ++b) {
    if ((mask >> b) & 1u) circuit.x(b);
  }
}

void emit_scaffold_step(Circuit& circuit, const ScaffoldStep& step) {
  std::vector<uint32_t> qubits = step.controls;
  qubits.push_back(step.target);
  circuit.add(step.kind, qubits);
}

}  // namespace

void emit_selector_rotation(Circuit& circuit, char axis, double gamma,
                            std::span<const uint32_t> controls, uint32_t target) {
  std::vector<std::vector<uint32_t>> groups;
  groups.reserve(controls.size());
  for (uint32_t c : controls) groups.push_back({c});
  emit_group_selector(circuit, axis, gamma, groups, target);
}

Circuit decompose_rccx() {
  Circuit c(3);
  const uint32_t a = 0, b = 1, t = 2;
  c.ry(kPi / 4.0, t);
  c.cx(b, t);
  c.ry(kPi / 4.0, t);
  c.cx(a, t);
  c.ry(-kPi / 4.0, t);
  c.cx(b, t);
  c.ry(-kPi / 4.0, t);
  return c;
}

Circuit decompose_rcccx() {
  Circuit c(4);
  const uint32_t c0 = 0, c1 = 1, c2 = 2, t = 3;
  c.h(t);
  c.rz(kPi / 4.0, t);
  c.cx(c2, t);
  c.rz(-kPi / 4.0, t);
  c.h(t);
  c.cx(c0, t);
  c.rz(kPi / 4.0, t);
  c.cx(c1, t);
  c.rz(-kPi / 4.0, t);
  c.cx(c0, t);
  c.rz(kPi / 4.0, t);
  c.cx(c1, t);
  c.rz(-kPi / 4.0, t);
  c.h(t);
  c.rz(kPi / 4.0, t);
  c.cx(c2, t);
  c.rz(-kPi / 4.0, t);
  c.h(t);
  return c;
}

Circuit decompose_mary(uint32_t arity, double gamma) {
  if (arity == 3) {
    // Exact two-controlled Ry as an alternating Ry/CX ladder.
    Circuit c(3);
    const uint32_t c0 = 0, c1 = 1, t = 2;
    c.ry(gamma / 4.0, t);
    c.cx(c1, t);
    c.ry(-gamma / 4.0, t);
    c.cx(c0, t);
    c.ry(gamma / 4.0, t);
    c.cx(c1, t);
    c.ry(-gamma / 4.0, t);
    c.cx(c0, t);
    return c;
  }

  const MaryShape shape = mary_shape(arity);
  Circuit c(arity);
  const uint32_t target = arity - 1;
  std::vector<std::vector<uint32_t>> groups = shape.groups;  // already control indices
  emit_wing(c, shape.wing, target);
  emit_group_selector(c, 'z', gamma, groups, target);
  emit_wing(c, shape.wing, target);
  return c;
}

LayoutPlan plan_mary_layout(uint32_t n) {
  if (n < 1 || (n > 9 && n != 13)) {
    throw FrqiError(errc::too_large, "MARY construction supports n in 1..9 and 13");
  }

  LayoutPlan plan;
  plan.n = n;
  plan.num_position = 2 * n;

  if (n <= 4) {
    plan.mary_arity = 2 * n + 1;
    plan.num_ancilla = 0;
    for (uint32_t q = 0; q < plan.num_position; ++q) plan.mary_lines.push_back(q);
    return plan;
  }

  const uint32_t arity = n <= 6 ? 8 : (n == 7 ? 9 : 10);
  plan.mary_arity = arity;
  const uint32_t lines = arity - 1;
  // One AND-chain of fresh ancillas absorbs the excess position qubits:
  // root = AND of the absorbed block, so the MARY condition stays exact.
  uint32_t absorbed = plan.num_position - lines + 1;
  uint32_t top = plan.num_position;  // next unconsumed position + 1
  uint32_t anc = plan.num_position + 1;

  plan.scaffold.push_back({GateKind::RCCCX, {top - 3, top - 2, top - 1}, anc});
  top -= 3;
  absorbed -= 3;
  while (absorbed >= 2) {
    plan.scaffold.push_back({GateKind::RCCCX, {anc, top - 2, top - 1}, anc + 1});
    ++anc;
    top -= 2;
    absorbed -= 2;
  }
  if (absorbed == 1) {
    plan.scaffold.push_back({GateKind::RCCX, {anc, top - 1}, anc + 1});
    ++anc;
    top -= 1;
  }
  plan.num_ancilla = anc - plan.num_position;

  for (uint32_t q = 0; q < lines - 1; ++q) plan.mary_lines.push_back(q);
  plan.mary_lines.push_back(anc);  // chain root
  return plan;
}

namespace {

Circuit::Layout frqi_layout(uint32_t num_position, uint32_t num_ancilla) {
  Circuit::Layout layout;
  for (uint32_t q = 0; q < num_position; ++q) layout.positions.push_back(q);
  layout.gray = num_position;
  for (uint32_t a = 0; a < num_ancilla; ++a) layout.ancillas.push_back(num_position + 1 + a);
  return layout;
}

}  // namespace

Circuit build_mcry_circuit(const AngleVector& angles, const BuilderLimits& limits) {
  validate_angles(angles);
  if (angles.n > limits.max_mcry_n) {
    throw FrqiError(errc::too_large, "MCRY builder limited to n <= " +
                                         std::to_string(limits.max_mcry_n));
  }
  const uint32_t num_position = 2 * angles.n;
  const uint64_t num_pixels = uint64_t{1} << num_position;

  Circuit circuit(num_position + 1);
  circuit.layout = frqi_layout(num_position, 0);
  circuit.reserve(num_pixels * 3 + num_position, num_pixels * (num_position + 3));

  std::vector<uint32_t> controls;
  for (uint32_t q = 0; q < num_position; ++q) {
    circuit.h(q);
    controls.push_back(q);
  }
  for (uint64_t pixel = 0; pixel < num_pixels; ++pixel) {
    emit_x_mask(circuit, addressing_mask(pixel, num_position), num_position);
    circuit.mcry(2.0 * angles.thetas[pixel], controls, num_position);
  }
  return circuit;
}

Circuit build_mary_circuit(const AngleVector& angles) {
  validate_angles(angles);
  const LayoutPlan plan = plan_mary_layout(angles.n);
  const uint32_t num_position = plan.num_position;
  const uint64_t num_pixels = uint64_t{1} << num_position;

  Circuit circuit(plan.num_qubits());
  circuit.layout = frqi_layout(num_position, plan.num_ancilla);
  const size_t per_pixel = 3 + 2 * plan.scaffold.size();
  circuit.reserve(num_pixels * per_pixel + num_position,
                  num_pixels * per_pixel * (plan.mary_arity / 2 + 2));

  for (uint32_t q = 0; q < num_position; ++q) circuit.h(q);
  for (uint64_t pixel = 0; pixel < num_pixels; ++pixel) {
    emit_x_mask(circuit, addressing_mask(pixel, num_position), num_position);
    for (const ScaffoldStep& step : plan.scaffold) {
      emit_scaffold_step(circuit, step);
    }
    circuit.mary(2.0 * angles.thetas[pixel], plan.mary_lines, plan.gray_qubit());
    for (auto it = plan.scaffold.rbegin(); it != plan.scaffold.rend(); ++it) {
      emit_scaffold_step(circuit, *it);
    }
  }
  return circuit;
}

}  // namespace frqi
