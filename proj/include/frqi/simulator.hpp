#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "frqi/circuit.hpp"
#include "frqi/distribution.hpp"

namespace frqi {

struct Statevector {
  uint32_t num_qubits = 0;
  std::vector<std::complex<double>> amps;

  uint64_t dim() const { return uint64_t{1} << num_qubits; }
  double norm() const;

  static Statevector zero_state(uint32_t num_qubits);
};

// Applies one gate in place. Composite kinds use their ideal semantics.
void apply_gate(Statevector& state, const Circuit::Gate& gate);
void run_circuit(Statevector& state, const Circuit& circuit);

struct NoiseModel {
  double p_meas = 0.0;
  double p_gate = 0.0;
  std::set<GateKind> noisy_kinds = {GateKind::X, GateKind::CX};

  bool has_gate_noise() const { return p_gate > 0.0; }
  bool has_meas_noise() const { return p_meas > 0.0; }
};

struct SimLimits {
  uint32_t max_qubits = 26;
};

// |amps|^2 of the final state evolved from |0...0>.
Distribution exact_probabilities(const Circuit& circuit, const SimLimits& limits = {});

// Monte-Carlo shot sampling. Without noise (or with all-zero probabilities)
// the state is evolved once and shots are drawn i.i.d.; with gate noise each
// shot is an independent trajectory where every acted-on qubit of a noisy-kind
// gate is hit by a uniform Pauli {X, Y, Z} with probability p_gate. Measured
// bits flip independently with probability p_meas. Deterministic given seed;
// shot s consumes its own RNG stream, so results are order-independent.
Counts sample(const Circuit& circuit, uint64_t shots, const std::optional<NoiseModel>& noise,
              uint64_t seed, const SimLimits& limits = {});

// Column-stochastic: column j is the measured distribution when basis state j
// is prepared under noise.
struct CalibrationMatrix {
  uint32_t num_qubits = 0;
  std::vector<double> m;  // column-major

  uint64_t dim() const { return uint64_t{1} << num_qubits; }
  double& at(uint64_t row, uint64_t col) { return m[col * dim() + row]; }
  const double& at(uint64_t row, uint64_t col) const { return m[col * dim() + row]; }
};

inline constexpr uint32_t kMaxCalibrationQubits = 12;

struct CalibrationOptions {
  bool gate_noise_on_prep = true;  // depolarize the X preparation gates too
};

CalibrationMatrix build_calibration(uint32_t num_qubits, const NoiseModel& noise,
                                    uint64_t shots_per_state, uint64_t seed,
                                    const CalibrationOptions& options = {});

// The exact readout-flip channel matrix for measurement-only noise.
CalibrationMatrix analytic_readout_calibration(uint32_t num_qubits, double p_meas);

// Nonnegative least squares against the calibration matrix, renormalized.
// Near-singular systems fall back to a ridge-regularized solve plus clamping.
Distribution mitigate(const Counts& counts, const CalibrationMatrix& calibration);
Distribution mitigate(const Distribution& empirical, const CalibrationMatrix& calibration);

// Forward application of the calibration channel: M * dist.
Distribution apply_channel(const CalibrationMatrix& calibration, const Distribution& dist);

}  // namespace frqi
