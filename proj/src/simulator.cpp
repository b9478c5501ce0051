#include "frqi/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "frqi/errors.hpp"
#include "gate_apply.hpp"

namespace frqi {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// One deterministic stream per shot so results are independent of scheduling.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream) : rng_(splitmix64(splitmix64(seed) ^ (stream + 1))) {}

  double next_double() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  uint32_t next_below(uint32_t bound) {
    const uint32_t v = static_cast<uint32_t>(next_double() * bound);
    return std::min(v, bound - 1);
  }

 private:
  std::mt19937_64 rng_;
};

void check_qubit_cap(uint32_t num_qubits, const SimLimits& limits) {
  if (num_qubits > limits.max_qubits) {
    throw FrqiError(errc::too_many_qubits, "circuit needs " + std::to_string(num_qubits) +
                                               " qubits, cap is " +
                                               std::to_string(limits.max_qubits));
  }
}

uint64_t sample_index_from_amps(const std::vector<std::complex<double>>& amps, double u) {
  double cumulative = 0.0;
  for (uint64_t i = 0; i < amps.size(); ++i) {
    cumulative += std::norm(amps[i]);
    if (u < cumulative) return i;
  }
  return amps.size() - 1;
}

uint64_t flip_bits(uint64_t state, uint32_t num_qubits, double p_meas, RngStream& rng) {
  for (uint32_t q = 0; q < num_qubits; ++q) {
    if (rng.next_double() < p_meas) state ^= uint64_t{1} << q;
  }
  return state;
}

void apply_random_pauli(Statevector& state, uint32_t qubit, uint32_t which) {
  const detail::Mat2 m =
      which == 0 ? detail::x_matrix() : (which == 1 ? detail::y_matrix() : detail::z_matrix());
  detail::apply_controlled_2x2(state.amps.data(), state.dim(), 0, qubit, m);
}

}  // namespace

double Statevector::norm() const {
  double total = 0.0;
  for (const auto& a : amps) total += std::norm(a);
  return std::sqrt(total);
}

Statevector Statevector::zero_state(uint32_t num_qubits) {
  Statevector state;
  state.num_qubits = num_qubits;
  state.amps.assign(uint64_t{1} << num_qubits, {0, 0});
  state.amps[0] = {1, 0};
  return state;
}

void apply_gate(Statevector& state, const Circuit::Gate& gate) {
  detail::apply_gate_raw(state.amps.data(), state.num_qubits, gate);
}

void run_circuit(Statevector& state, const Circuit& circuit) {
  if (circuit.num_qubits() != state.num_qubits) {
    throw FrqiError(errc::dim_mismatch, "statevector and circuit qubit counts differ");
  }
  for (size_t i = 0; i < circuit.size(); ++i) {
    apply_gate(state, circuit.gate(i));
  }
}

Distribution exact_probabilities(const Circuit& circuit, const SimLimits& limits) {
  check_qubit_cap(circuit.num_qubits(), limits);
  Statevector state = Statevector::zero_state(circuit.num_qubits());
  run_circuit(state, circuit);
  Distribution dist;
  dist.num_qubits = circuit.num_qubits();
  dist.probs.resize(state.dim());
  for (uint64_t i = 0; i < state.dim(); ++i) dist.probs[i] = std::norm(state.amps[i]);
  return dist;
}

Counts sample(const Circuit& circuit, uint64_t shots, const std::optional<NoiseModel>& noise,
              uint64_t seed, const SimLimits& limits) {
  check_qubit_cap(circuit.num_qubits(), limits);
  if (shots == 0) {
    throw FrqiError(errc::zero_shots, "at least one shot required");
  }

  const uint32_t q = circuit.num_qubits();
  const bool gate_noise = noise && noise->has_gate_noise();
  const bool meas_noise = noise && noise->has_meas_noise();

  Counts counts;
  counts.shots = shots;

  if (!gate_noise) {
    // Single evolution; shots drawn i.i.d. from the exact distribution. Each
    // shot still uses its own stream, and its first draw is the measurement,
    // so a zero-probability noise model reproduces this path bit-exactly.
    Statevector state = Statevector::zero_state(q);
    run_circuit(state, circuit);
    std::vector<double> cdf(state.dim());
    double cumulative = 0.0;
    for (uint64_t i = 0; i < state.dim(); ++i) {
      cumulative += std::norm(state.amps[i]);
      cdf[i] = cumulative;
    }
    for (uint64_t s = 0; s < shots; ++s) {
      RngStream rng(seed, s);
      const double u = rng.next_double();
      uint64_t idx =
          static_cast<uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      idx = std::min<uint64_t>(idx, state.dim() - 1);
      if (meas_noise) idx = flip_bits(idx, q, noise->p_meas, rng);
      ++counts.histogram[idx];
    }
    return counts;
  }

  // Monte-Carlo trajectories.
  for (uint64_t s = 0; s < shots; ++s) {
    RngStream rng(seed, s);
    Statevector state = Statevector::zero_state(q);
    for (size_t i = 0; i < circuit.size(); ++i) {
      const Circuit::Gate g = circuit.gate(i);
      apply_gate(state, g);
      if (noise->noisy_kinds.count(g.kind) > 0) {
        for (uint32_t qubit : g.qubits) {
          if (rng.next_double() < noise->p_gate) {
            apply_random_pauli(state, qubit, rng.next_below(3));
          }
        }
      }
    }
    uint64_t idx = sample_index_from_amps(state.amps, rng.next_double());
    if (meas_noise) idx = flip_bits(idx, q, noise->p_meas, rng);
    ++counts.histogram[idx];
  }
  return counts;
}

CalibrationMatrix build_calibration(uint32_t num_qubits, const NoiseModel& noise,
                                    uint64_t shots_per_state, uint64_t seed,
                                    const CalibrationOptions& options) {
  if (num_qubits > kMaxCalibrationQubits) {
    throw FrqiError(errc::too_many_qubits, "calibration supports at most " +
                                               std::to_string(kMaxCalibrationQubits) + " qubits");
  }
  NoiseModel effective = noise;
  if (!options.gate_noise_on_prep) effective.p_gate = 0.0;

  CalibrationMatrix cal;
  cal.num_qubits = num_qubits;
  const uint64_t dim = cal.dim();
  cal.m.assign(dim * dim, 0.0);
  for (uint64_t prepared = 0; prepared < dim; ++prepared) {
    Circuit prep(num_qubits);
    for (uint32_t q = 0; q < num_qubits; ++q) {
      if ((prepared >> q) & 1u) prep.x(q);
    }
    const Counts counts =
        sample(prep, shots_per_state, effective, splitmix64(seed) ^ splitmix64(prepared + 1));
    for (const auto& [state, count] : counts.histogram) {
      cal.at(state, prepared) =
          static_cast<double>(count) / static_cast<double>(shots_per_state);
    }
  }
  return cal;
}

CalibrationMatrix analytic_readout_calibration(uint32_t num_qubits, double p_meas) {
  if (num_qubits > kMaxCalibrationQubits) {
    throw FrqiError(errc::too_many_qubits, "calibration supports at most " +
                                               std::to_string(kMaxCalibrationQubits) + " qubits");
  }
  CalibrationMatrix cal;
  cal.num_qubits = num_qubits;
  const uint64_t dim = cal.dim();
  cal.m.assign(dim * dim, 0.0);
  for (uint64_t col = 0; col < dim; ++col) {
    for (uint64_t row = 0; row < dim; ++row) {
      const int flips = std::popcount(row ^ col);
      cal.at(row, col) = std::pow(p_meas, flips) * std::pow(1.0 - p_meas, num_qubits - flips);
    }
  }
  return cal;
}

namespace {

// Solves A x = b (A symmetric positive semi-definite) by Gaussian elimination
// with partial pivoting; adds a small ridge when a pivot collapses.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, size_t n) {
  constexpr double kPivotTol = 1e-13;
  bool ridge_added = false;
  for (size_t attempt = 0; attempt < 2; ++attempt) {
    std::vector<double> m = a;
    std::vector<double> rhs = b;
    if (attempt == 1) {
      for (size_t i = 0; i < n; ++i) m[i * n + i] += 1e-10;
      ridge_added = true;
    }
    bool ok = true;
    for (size_t col = 0; col < n && ok; ++col) {
      size_t pivot = col;
      for (size_t r = col + 1; r < n; ++r) {
        if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
      }
      if (std::abs(m[pivot * n + col]) < kPivotTol) {
        ok = false;
        break;
      }
      if (pivot != col) {
        for (size_t c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
        std::swap(rhs[pivot], rhs[col]);
      }
      for (size_t r = col + 1; r < n; ++r) {
        const double f = m[r * n + col] / m[col * n + col];
        if (f == 0.0) continue;
        for (size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
        rhs[r] -= f * rhs[col];
      }
    }
    if (!ok) continue;
    std::vector<double> x(n, 0.0);
    for (size_t i = n; i-- > 0;) {
      double acc = rhs[i];
      for (size_t c = i + 1; c < n; ++c) acc -= m[i * n + c] * x[c];
      x[i] = acc / m[i * n + i];
    }
    return x;
  }
  (void)ridge_added;
  // Fully degenerate even with the ridge: give up and return zeros; the
  // caller clamps and renormalizes.
  return std::vector<double>(n, 0.0);
}

}  // namespace

Distribution mitigate(const Distribution& empirical, const CalibrationMatrix& calibration) {
  const uint64_t dim = calibration.dim();
  if (empirical.num_qubits != calibration.num_qubits || empirical.probs.size() != dim) {
    throw FrqiError(errc::dim_mismatch, "calibration and distribution dimensions differ");
  }

  // Active-set nonnegative least squares on min ||M x - e||_2.
  std::vector<bool> active(dim, true);
  std::vector<double> x(dim, 0.0);
  for (uint64_t round = 0; round <= dim; ++round) {
    std::vector<uint64_t> free_cols;
    for (uint64_t c = 0; c < dim; ++c) {
      if (active[c]) free_cols.push_back(c);
    }
    if (free_cols.empty()) break;
    const size_t k = free_cols.size();
    std::vector<double> gram(k * k, 0.0);
    std::vector<double> rhs(k, 0.0);
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = i; j < k; ++j) {
        double dot = 0.0;
        for (uint64_t r = 0; r < dim; ++r) {
          dot += calibration.at(r, free_cols[i]) * calibration.at(r, free_cols[j]);
        }
        gram[i * k + j] = dot;
        gram[j * k + i] = dot;
      }
      double dot = 0.0;
      for (uint64_t r = 0; r < dim; ++r) {
        dot += calibration.at(r, free_cols[i]) * empirical.probs[r];
      }
      rhs[i] = dot;
    }
    const std::vector<double> solution = solve_spd(gram, rhs, k);

    double most_negative = -1e-12;
    int64_t worst = -1;
    std::fill(x.begin(), x.end(), 0.0);
    for (size_t i = 0; i < k; ++i) {
      x[free_cols[i]] = solution[i];
      if (solution[i] < most_negative) {
        most_negative = solution[i];
        worst = static_cast<int64_t>(free_cols[i]);
      }
    }
    if (worst < 0) break;
    active[static_cast<uint64_t>(worst)] = false;
  }

  Distribution out;
  out.num_qubits = calibration.num_qubits;
  out.probs.resize(dim);
  double total = 0.0;
  for (uint64_t i = 0; i < dim; ++i) {
    out.probs[i] = std::max(x[i], 0.0);
    total += out.probs[i];
  }
  if (total <= 0.0) {
    out.probs = empirical.probs;  // degenerate calibration; keep the data
    total = std::max(empirical.sum(), 1e-300);
  }
  for (double& p : out.probs) p /= total;
  return out;
}

Distribution mitigate(const Counts& counts, const CalibrationMatrix& calibration) {
  return mitigate(counts_to_distribution(counts, calibration.num_qubits), calibration);
}

Distribution apply_channel(const CalibrationMatrix& calibration, const Distribution& dist) {
  const uint64_t dim = calibration.dim();
  if (dist.num_qubits != calibration.num_qubits) {
    throw FrqiError(errc::dim_mismatch, "calibration and distribution dimensions differ");
  }
  Distribution out;
  out.num_qubits = dist.num_qubits;
  out.probs.assign(dim, 0.0);
  for (uint64_t col = 0; col < dim; ++col) {
    const double p = dist.probs[col];
    if (p == 0.0) continue;
    for (uint64_t row = 0; row < dim; ++row) {
      out.probs[row] += calibration.at(row, col) * p;
    }
  }
  return out;
}

}  // namespace frqi
