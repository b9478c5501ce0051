#include "frqi/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "frqi/errors.hpp"

namespace frqi {

namespace {

struct KindInfo {
  const char* name;
  int arity;        // -1: variable
  int num_angles;   // primary angles (CU handled separately)
};

const KindInfo& kind_info(GateKind kind) {
  static const KindInfo table[] = {
      {"I", 1, 0},    {"X", 1, 0},    {"SX", 1, 0},    {"H", 1, 0},
      {"RY", 1, 1},   {"RZ", 1, 1},   {"CX", 2, 0},    {"CU", 2, 1},
      {"SWAP", 2, 0}, {"MCRY", -1, 1}, {"MARY", -1, 1}, {"RCCX", 3, 0},
      {"RCCCX", 4, 0},
  };
  return table[static_cast<size_t>(kind)];
}

bool valid_mary_arity(size_t arity) {
  return arity == 3 || arity == 5 || arity == 7 || arity == 8 || arity == 9 || arity == 10;
}

}  // namespace

const char* to_string(GateKind kind) { return kind_info(kind).name; }

std::optional<GateKind> gate_kind_from_string(const std::string& name) {
  for (int k = 0; k <= static_cast<int>(GateKind::RCCCX); ++k) {
    if (name == kind_info(static_cast<GateKind>(k)).name) {
      return static_cast<GateKind>(k);
    }
  }
  return std::nullopt;
}

Circuit::Circuit(uint32_t num_qubits) : num_qubits_(num_qubits) {
  qubit_offsets_.push_back(0);
  layout = default_layout(num_qubits);
}

Circuit::Layout default_layout(uint32_t num_qubits) {
  Circuit::Layout layout;
  layout.positions.resize(num_qubits);
  std::iota(layout.positions.begin(), layout.positions.end(), 0u);
  return layout;
}

void Circuit::reserve(size_t gates, size_t qubit_refs) {
  kinds_.reserve(gates);
  angles_.reserve(gates);
  qubit_offsets_.reserve(gates + 1);
  qubit_refs_.reserve(qubit_refs);
}

void Circuit::add(GateKind kind, std::span<const uint32_t> qubits, double angle) {
  const KindInfo& info = kind_info(kind);
  if (info.arity >= 0 && qubits.size() != static_cast<size_t>(info.arity)) {
    throw FrqiError(errc::bad_argument,
                    std::string(info.name) + " expects " + std::to_string(info.arity) + " qubits");
  }
  if (kind == GateKind::MCRY && qubits.size() < 2) {
    throw FrqiError(errc::bad_argument, "MCRY needs at least one control");
  }
  if (kind == GateKind::MARY && !valid_mary_arity(qubits.size())) {
    throw FrqiError(errc::unsupported_arity, "MARY arity must be one of {3,5,7,8,9,10}");
  }
  if (!std::isfinite(angle)) {
    throw FrqiError(errc::bad_argument, "gate angle must be finite");
  }
  for (size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] >= num_qubits_) {
      throw FrqiError(errc::bad_argument, "qubit index out of range");
    }
    for (size_t j = i + 1; j < qubits.size(); ++j) {
      if (qubits[i] == qubits[j]) {
        throw FrqiError(errc::bad_argument, "gate qubits must be distinct");
      }
    }
  }
  kinds_.push_back(kind);
  angles_.push_back(angle);
  qubit_refs_.insert(qubit_refs_.end(), qubits.begin(), qubits.end());
  qubit_offsets_.push_back(qubit_refs_.size());
}

void Circuit::add(GateKind kind, std::initializer_list<uint32_t> qubits, double angle) {
  add(kind, std::span<const uint32_t>(qubits.begin(), qubits.size()), angle);
}

void Circuit::cu(const CuParams& params, uint32_t control, uint32_t target) {
  add(GateKind::CU, {control, target}, params.theta);
  cu_params_[kinds_.size() - 1] = params;
}

void Circuit::mcry(double theta, std::span<const uint32_t> controls, uint32_t target) {
  std::vector<uint32_t> qubits(controls.begin(), controls.end());
  qubits.push_back(target);
  add(GateKind::MCRY, qubits, theta);
}

void Circuit::mary(double theta, std::span<const uint32_t> controls, uint32_t target) {
  std::vector<uint32_t> qubits(controls.begin(), controls.end());
  qubits.push_back(target);
  add(GateKind::MARY, qubits, theta);
}

Circuit::Gate Circuit::gate(size_t index) const {
  Gate g;
  g.kind = kinds_[index];
  g.angle = angles_[index];
  g.qubits = std::span<const uint32_t>(qubit_refs_.data() + qubit_offsets_[index],
                                       qubit_offsets_[index + 1] - qubit_offsets_[index]);
  if (g.kind == GateKind::CU) {
    g.cu = &cu_params_.at(index);
  }
  return g;
}

void Circuit::append(const Circuit& other) {
  if (other.num_qubits_ != num_qubits_) {
    throw FrqiError(errc::bad_argument, "appended circuit must match qubit count");
  }
  for (size_t i = 0; i < other.size(); ++i) {
    Gate g = other.gate(i);
    if (g.kind == GateKind::CU) {
      cu(*g.cu, g.qubits[0], g.qubits[1]);
    } else {
      add(g.kind, g.qubits, g.angle);
    }
  }
}

uint64_t depth(const Circuit& circuit) {
  std::vector<uint64_t> level(circuit.num_qubits(), 0);
  uint64_t max_level = 0;
  for (size_t i = 0; i < circuit.size(); ++i) {
    const Circuit::Gate g = circuit.gate(i);
    uint64_t layer = 0;
    for (uint32_t q : g.qubits) layer = std::max(layer, level[q]);
    ++layer;
    for (uint32_t q : g.qubits) level[q] = layer;
    max_level = std::max(max_level, layer);
  }
  return max_level;
}

std::map<GateKind, uint64_t> gate_counts(const Circuit& circuit) {
  std::map<GateKind, uint64_t> counts;
  for (size_t i = 0; i < circuit.size(); ++i) {
    ++counts[circuit.gate(i).kind];
  }
  return counts;
}

uint64_t cx_count(const Circuit& circuit) {
  uint64_t count = 0;
  for (size_t i = 0; i < circuit.size(); ++i) {
    if (circuit.gate(i).kind == GateKind::CX) ++count;
  }
  return count;
}

void write_circuit(std::ostream& os, const Circuit& circuit) {
  os.precision(17);
  os << "frqi-circuit v1\n";
  os << "qubits " << circuit.num_qubits() << "\n";
  if (circuit.layout.gray) {
    os << "gray " << *circuit.layout.gray << "\n";
  }
  os << "positions";
  for (uint32_t q : circuit.layout.positions) os << " " << q;
  os << "\n";
  os << "ancillas";
  for (uint32_t q : circuit.layout.ancillas) os << " " << q;
  os << "\n";
  for (size_t i = 0; i < circuit.size(); ++i) {
    const Circuit::Gate g = circuit.gate(i);
    os << to_string(g.kind);
    for (uint32_t q : g.qubits) os << " " << q;
    if (g.kind == GateKind::CU) {
      os << " " << g.cu->theta << " " << g.cu->phi << " " << g.cu->lambda << " " << g.cu->gamma;
    } else if (g.kind == GateKind::Ry || g.kind == GateKind::Rz || g.kind == GateKind::MCRY ||
               g.kind == GateKind::MARY) {
      os << " " << g.angle;
    }
    os << "\n";
  }
}

Circuit read_circuit(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "frqi-circuit v1") {
    throw FrqiError(errc::bad_argument, "not a frqi circuit file");
  }

  Circuit circuit;
  Circuit::Layout layout;
  bool have_qubits = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "qubits") {
      uint32_t n = 0;
      ls >> n;
      circuit = Circuit(n);
      layout = Circuit::Layout{};
      have_qubits = true;
    } else if (head == "gray") {
      uint32_t q;
      ls >> q;
      layout.gray = q;
    } else if (head == "positions") {
      uint32_t q;
      while (ls >> q) layout.positions.push_back(q);
    } else if (head == "ancillas") {
      uint32_t q;
      while (ls >> q) layout.ancillas.push_back(q);
    } else {
      if (!have_qubits) {
        throw FrqiError(errc::bad_argument, "gate line before qubit count");
      }
      auto kind = gate_kind_from_string(head);
      if (!kind) {
        throw FrqiError(errc::unknown_gate_kind, head);
      }
      // Everything numeric on the line: leading integers are qubits, the
      // remaining reals are angles.
      std::vector<std::string> fields;
      std::string field;
      while (ls >> field) fields.push_back(field);
      const size_t num_angles = *kind == GateKind::CU                                    ? 4
                                : (*kind == GateKind::Ry || *kind == GateKind::Rz ||
                                   *kind == GateKind::MCRY || *kind == GateKind::MARY)  ? 1
                                                                                         : 0;
      if (fields.size() < num_angles + 1) {
        throw FrqiError(errc::bad_argument, "truncated gate line: " + line);
      }
      std::vector<uint32_t> qubits;
      for (size_t i = 0; i + num_angles < fields.size(); ++i) {
        qubits.push_back(static_cast<uint32_t>(std::stoul(fields[i])));
      }
      if (*kind == GateKind::CU) {
        CuParams params;
        params.theta = std::stod(fields[fields.size() - 4]);
        params.phi = std::stod(fields[fields.size() - 3]);
        params.lambda = std::stod(fields[fields.size() - 2]);
        params.gamma = std::stod(fields[fields.size() - 1]);
        circuit.cu(params, qubits.at(0), qubits.at(1));
      } else {
        double angle = num_angles ? std::stod(fields.back()) : 0.0;
        circuit.add(*kind, qubits, angle);
      }
    }
  }
  if (!have_qubits) {
    throw FrqiError(errc::bad_argument, "missing qubit count");
  }
  if (layout.positions.empty() && !layout.gray && layout.ancillas.empty()) {
    layout = default_layout(circuit.num_qubits());
  }
  circuit.layout = layout;
  return circuit;
}

void save_circuit(const Circuit& circuit, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw FrqiError(errc::io_error, "cannot open " + path + " for writing");
  write_circuit(os, circuit);
  if (!os) throw FrqiError(errc::io_error, "write to " + path + " failed");
}

Circuit load_circuit(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FrqiError(errc::io_error, "cannot open " + path);
  return read_circuit(is);
}

}  // namespace frqi
