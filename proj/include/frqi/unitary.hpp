#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "frqi/circuit.hpp"

namespace frqi {

using Complex = std::complex<double>;

// Dense 2^q x 2^q matrix, column-major (columns are evolved basis states).
struct Unitary {
  uint32_t num_qubits = 0;
  std::vector<Complex> m;

  uint64_t dim() const { return uint64_t{1} << num_qubits; }
  Complex& at(uint64_t row, uint64_t col) { return m[col * dim() + row]; }
  const Complex& at(uint64_t row, uint64_t col) const { return m[col * dim() + row]; }

  static Unitary identity(uint32_t num_qubits);
};

inline constexpr uint32_t kMaxUnitaryQubits = 12;

// Product of the circuit's gate matrices in order, qubit 0 least significant.
// Composite kinds use their ideal semantics (MCRY/MARY: multi-controlled Ry;
// RCCX: Toffoli; RCCCX: triple-controlled X).
Unitary unitary_of(const Circuit& circuit);

// max_{r,c} | |a| - |b| | entrywise; the relative-phase equivalence metric.
double max_abs_magnitude_diff(const Unitary& a, const Unitary& b);

// max entrywise |A - B|.
double max_abs_diff(const Unitary& a, const Unitary& b);

// ||U U^dagger - I||_max; zero for unitary matrices.
double unitarity_defect(const Unitary& u);

}  // namespace frqi
