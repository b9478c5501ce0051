#include "frqi/unitary.hpp"

#include <cmath>

#include "frqi/errors.hpp"
#include "gate_apply.hpp"

namespace frqi {

Unitary Unitary::identity(uint32_t num_qubits) {
  Unitary u;
  u.num_qubits = num_qubits;
  const uint64_t dim = u.dim();
  u.m.assign(dim * dim, Complex{0, 0});
  for (uint64_t i = 0; i < dim; ++i) u.at(i, i) = Complex{1, 0};
  return u;
}

Unitary unitary_of(const Circuit& circuit) {
  if (circuit.num_qubits() > kMaxUnitaryQubits) {
    throw FrqiError(errc::too_many_qubits,
                    "unitary_of supports at most " + std::to_string(kMaxUnitaryQubits) + " qubits");
  }
  Unitary u = Unitary::identity(circuit.num_qubits());
  const uint64_t dim = u.dim();
  for (size_t i = 0; i < circuit.size(); ++i) {
    const Circuit::Gate g = circuit.gate(i);
    for (uint64_t col = 0; col < dim; ++col) {
      detail::apply_gate_raw(u.m.data() + col * dim, circuit.num_qubits(), g);
    }
  }
  return u;
}

double max_abs_magnitude_diff(const Unitary& a, const Unitary& b) {
  if (a.num_qubits != b.num_qubits) {
    throw FrqiError(errc::dim_mismatch, "unitary dimensions differ");
  }
  double worst = 0.0;
  for (size_t i = 0; i < a.m.size(); ++i) {
    worst = std::max(worst, std::abs(std::abs(a.m[i]) - std::abs(b.m[i])));
  }
  return worst;
}

double max_abs_diff(const Unitary& a, const Unitary& b) {
  if (a.num_qubits != b.num_qubits) {
    throw FrqiError(errc::dim_mismatch, "unitary dimensions differ");
  }
  double worst = 0.0;
  for (size_t i = 0; i < a.m.size(); ++i) {
    worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
  }
  return worst;
}

double unitarity_defect(const Unitary& u) {
  const uint64_t dim = u.dim();
  double worst = 0.0;
  for (uint64_t r = 0; r < dim; ++r) {
    for (uint64_t c = 0; c < dim; ++c) {
      Complex dot{0, 0};
      for (uint64_t k = 0; k < dim; ++k) {
        dot += u.at(r, k) * std::conj(u.at(c, k));
      }
      const Complex expected = r == c ? Complex{1, 0} : Complex{0, 0};
      worst = std::max(worst, std::abs(dot - expected));
    }
  }
  return worst;
}

}  // namespace frqi
