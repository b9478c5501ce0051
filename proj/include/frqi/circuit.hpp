#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace frqi {

enum class GateKind : uint8_t {
  I,
  X,
  SX,
  H,
  Ry,
  Rz,
  CX,
  CU,
  SWAP,
  MCRY,
  MARY,
  RCCX,
  RCCCX,
};

const char* to_string(GateKind kind);
std::optional<GateKind> gate_kind_from_string(const std::string& name);

// 4-parameter controlled-U: U = e^{i*gamma} * U3(theta, phi, lambda).
struct CuParams {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
};

// Ordered gate list over indexed qubits. Gate qubits are distinct, target last.
// Stored structure-of-arrays so multi-million-gate circuits stay compact.
class Circuit {
 public:
  struct Layout {
    std::optional<uint32_t> gray;
    std::vector<uint32_t> positions;
    std::vector<uint32_t> ancillas;
  };

  struct Gate {
    GateKind kind;
    double angle;                      // rotation angle; theta for CU
    std::span<const uint32_t> qubits;  // target last
    const CuParams* cu = nullptr;      // set iff kind == CU

    uint32_t target() const { return qubits.back(); }
  };

  Circuit() : Circuit(0) {}
  explicit Circuit(uint32_t num_qubits);

  uint32_t num_qubits() const { return num_qubits_; }
  size_t size() const { return kinds_.size(); }
  bool empty() const { return kinds_.empty(); }
  Gate gate(size_t index) const;

  void reserve(size_t gates, size_t qubit_refs);

  void add(GateKind kind, std::span<const uint32_t> qubits, double angle = 0.0);
  void add(GateKind kind, std::initializer_list<uint32_t> qubits, double angle = 0.0);

  void id(uint32_t q) { add(GateKind::I, {q}); }
  void x(uint32_t q) { add(GateKind::X, {q}); }
  void sx(uint32_t q) { add(GateKind::SX, {q}); }
  void h(uint32_t q) { add(GateKind::H, {q}); }
  void ry(double theta, uint32_t q) { add(GateKind::Ry, {q}, theta); }
  void rz(double theta, uint32_t q) { add(GateKind::Rz, {q}, theta); }
  void cx(uint32_t control, uint32_t target) { add(GateKind::CX, {control, target}); }
  void swap_gate(uint32_t a, uint32_t b) { add(GateKind::SWAP, {a, b}); }
  void cu(const CuParams& params, uint32_t control, uint32_t target);
  void mcry(double theta, std::span<const uint32_t> controls, uint32_t target);
  void mary(double theta, std::span<const uint32_t> controls, uint32_t target);
  void rccx(uint32_t a, uint32_t b, uint32_t target) { add(GateKind::RCCX, {a, b, target}); }
  void rcccx(uint32_t a, uint32_t b, uint32_t c, uint32_t target) {
    add(GateKind::RCCCX, {a, b, c, target});
  }

  // Appends all gates of `other` (same qubit count required).
  void append(const Circuit& other);

  class ConstIterator {
   public:
    ConstIterator(const Circuit* c, size_t i) : circuit_(c), index_(i) {}
    Gate operator*() const { return circuit_->gate(index_); }
    ConstIterator& operator++() {
      ++index_;
      return *this;
    }
    bool operator!=(const ConstIterator& other) const { return index_ != other.index_; }

   private:
    const Circuit* circuit_;
    size_t index_;
  };
  ConstIterator begin() const { return {this, 0}; }
  ConstIterator end() const { return {this, size()}; }

  Layout layout;

 private:
  uint32_t num_qubits_ = 0;
  std::vector<GateKind> kinds_;
  std::vector<double> angles_;
  std::vector<uint64_t> qubit_offsets_;  // size() + 1 entries
  std::vector<uint32_t> qubit_refs_;
  std::map<size_t, CuParams> cu_params_;
};

// Default layout: every qubit a position, no gray, no ancillas.
Circuit::Layout default_layout(uint32_t num_qubits);

// Greedy as-soon-as-possible layering: number of layers of qubit-disjoint gates.
uint64_t depth(const Circuit& circuit);

// Multiset count per gate kind, angles erased.
std::map<GateKind, uint64_t> gate_counts(const Circuit& circuit);
uint64_t cx_count(const Circuit& circuit);

// Line-oriented text form: header, then one "KIND q0 q1 ... [angles]" per line.
void write_circuit(std::ostream& os, const Circuit& circuit);
Circuit read_circuit(std::istream& is);
void save_circuit(const Circuit& circuit, const std::string& path);
Circuit load_circuit(const std::string& path);

}  // namespace frqi
