#pragma once

// Internal: in-place gate application on a raw amplitude array,
// qubit 0 = least significant bit of the state index.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "frqi/circuit.hpp"
#include "frqi/errors.hpp"

namespace frqi::detail {

using Cx = std::complex<double>;
using Mat2 = std::array<Cx, 4>;  // row-major [u00, u01, u10, u11]

inline Mat2 ry_matrix(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {Cx{c, 0}, Cx{-s, 0}, Cx{s, 0}, Cx{c, 0}};
}

inline Mat2 rz_matrix(double theta) {
  return {std::polar(1.0, -theta / 2.0), Cx{0, 0}, Cx{0, 0}, std::polar(1.0, theta / 2.0)};
}

inline Mat2 sx_matrix() {
  return {Cx{0.5, 0.5}, Cx{0.5, -0.5}, Cx{0.5, -0.5}, Cx{0.5, 0.5}};
}

inline Mat2 h_matrix() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Cx{s, 0}, Cx{s, 0}, Cx{s, 0}, Cx{-s, 0}};
}

inline Mat2 x_matrix() { return {Cx{0, 0}, Cx{1, 0}, Cx{1, 0}, Cx{0, 0}}; }

inline Mat2 y_matrix() { return {Cx{0, 0}, Cx{0, -1}, Cx{0, 1}, Cx{0, 0}}; }

inline Mat2 z_matrix() { return {Cx{1, 0}, Cx{0, 0}, Cx{0, 0}, Cx{-1, 0}}; }

// U = e^{i gamma} U3(theta, phi, lambda)
inline Mat2 cu_target_matrix(const CuParams& p) {
  const double c = std::cos(p.theta / 2.0), s = std::sin(p.theta / 2.0);
  const Cx g = std::polar(1.0, p.gamma);
  return {g * c, -g * std::polar(1.0, p.lambda) * s, g * std::polar(1.0, p.phi) * s,
          g * std::polar(1.0, p.phi + p.lambda) * c};
}

// Applies `u` to `target` on every basis pair whose control bits are all set.
inline void apply_controlled_2x2(Cx* amps, uint64_t dim, uint64_t control_mask, uint32_t target,
                                 const Mat2& u) {
  const uint64_t tmask = uint64_t{1} << target;
  for (uint64_t i = 0; i < dim; ++i) {
    if ((i & tmask) != 0 || (i & control_mask) != control_mask) continue;
    const uint64_t j = i | tmask;
    const Cx a0 = amps[i], a1 = amps[j];
    amps[i] = u[0] * a0 + u[1] * a1;
    amps[j] = u[2] * a0 + u[3] * a1;
  }
}

inline void apply_swap(Cx* amps, uint64_t dim, uint32_t a, uint32_t b) {
  const uint64_t amask = uint64_t{1} << a, bmask = uint64_t{1} << b;
  for (uint64_t i = 0; i < dim; ++i) {
    if ((i & amask) != 0 && (i & bmask) == 0) {
      std::swap(amps[i], amps[(i ^ amask) | bmask]);
    }
  }
}

inline uint64_t control_mask_of(std::span<const uint32_t> qubits, size_t num_controls) {
  uint64_t mask = 0;
  for (size_t i = 0; i < num_controls; ++i) mask |= uint64_t{1} << qubits[i];
  return mask;
}

// Composite kinds use ideal semantics: MCRY/MARY as multi-controlled Ry,
// RCCX/RCCCX as Toffoli / triple-controlled X.
inline void apply_gate_raw(Cx* amps, uint32_t num_qubits, const Circuit::Gate& g) {
  const uint64_t dim = uint64_t{1} << num_qubits;
  switch (g.kind) {
    case GateKind::I:
      break;
    case GateKind::X:
      apply_controlled_2x2(amps, dim, 0, g.qubits[0], x_matrix());
      break;
    case GateKind::SX:
      apply_controlled_2x2(amps, dim, 0, g.qubits[0], sx_matrix());
      break;
    case GateKind::H:
      apply_controlled_2x2(amps, dim, 0, g.qubits[0], h_matrix());
      break;
    case GateKind::Ry:
      apply_controlled_2x2(amps, dim, 0, g.qubits[0], ry_matrix(g.angle));
      break;
    case GateKind::Rz:
      apply_controlled_2x2(amps, dim, 0, g.qubits[0], rz_matrix(g.angle));
      break;
    case GateKind::CX:
      apply_controlled_2x2(amps, dim, control_mask_of(g.qubits, 1), g.qubits[1], x_matrix());
      break;
    case GateKind::CU:
      apply_controlled_2x2(amps, dim, control_mask_of(g.qubits, 1), g.qubits[1],
                           cu_target_matrix(*g.cu));
      break;
    case GateKind::SWAP:
      apply_swap(amps, dim, g.qubits[0], g.qubits[1]);
      break;
    case GateKind::MCRY:
    case GateKind::MARY:
      apply_controlled_2x2(amps, dim, control_mask_of(g.qubits, g.qubits.size() - 1),
                           g.qubits.back(), ry_matrix(g.angle));
      break;
    case GateKind::RCCX:
    case GateKind::RCCCX:
      apply_controlled_2x2(amps, dim, control_mask_of(g.qubits, g.qubits.size() - 1),
                           g.qubits.back(), x_matrix());
      break;
  }
}

}  // namespace frqi::detail
