#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "frqi/errors.hpp"
#include "frqi/frqi_builder.hpp"
#include "frqi/image_codec.hpp"
#include "frqi/simulator.hpp"
#include "frqi/transpiler.hpp"

using namespace frqi;

namespace {

constexpr double kPi = 3.14159265358979323846;

AngleVector sample_2x2_angles() {
  Image image;
  image.side = 2;
  image.pixels = {10, 85, 170, 255};
  return gray_to_angles(image, EncodingMode::Linear);
}

Circuit random_basis_circuit(uint32_t num_qubits, size_t gates, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Circuit c(num_qubits);
  for (size_t i = 0; i < gates; ++i) {
    const uint32_t q = static_cast<uint32_t>(rng() % num_qubits);
    switch (rng() % 5) {
      case 0: c.x(q); break;
      case 1: c.sx(q); break;
      case 2: c.h(q); break;
      case 3: c.rz(1e-3 * static_cast<double>(rng() % 6283), q); break;
      default: {
        const uint32_t t = (q + 1 + static_cast<uint32_t>(rng() % (num_qubits - 1))) % num_qubits;
        c.cx(q, t);
        break;
      }
    }
  }
  return c;
}

double total_variation(const Distribution& p, const Counts& counts) {
  double tv = 0.0;
  const Distribution q = counts_to_distribution(counts, p.num_qubits);
  for (uint64_t i = 0; i < p.dim(); ++i) {
    tv += std::abs(p.probs[i] - q.probs[i]);
  }
  return tv / 2.0;
}

// chi-squared upper critical values at alpha = 0.001 for df = 1..10
constexpr double kChi2Crit[] = {0,      10.828, 13.816, 16.266, 18.467, 20.515,
                                22.458, 24.322, 26.124, 27.877, 29.588};

}  // namespace

TEST_CASE("statevector norm is preserved by every gate kind") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const Circuit c = random_basis_circuit(5, 60, 10 + seed);
    Statevector state = Statevector::zero_state(5);
    run_circuit(state, c);
    CHECK(std::abs(state.norm() - 1.0) < 1e-10);
  }
  Circuit composite(6);
  composite.mcry(0.9, std::vector<uint32_t>{0, 1, 2}, 5);
  composite.mary(1.1, std::vector<uint32_t>{0, 1}, 4);
  composite.rccx(0, 1, 3);
  composite.rcccx(0, 1, 2, 3);
  composite.swap_gate(4, 5);
  composite.cu({0.5, 0.25, 0.75, 0.1}, 0, 5);
  Statevector state = Statevector::zero_state(6);
  run_circuit(state, composite);
  CHECK(std::abs(state.norm() - 1.0) < 1e-10);
}

TEST_CASE("exact probabilities of elementary circuits") {
  SUBCASE("empty circuit is a point mass") {
    const Distribution dist = exact_probabilities(Circuit(3));
    CHECK(dist.probs[0] == 1.0);
    CHECK(dist.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Hadamard layer is uniform over gray=0 states") {
    Circuit c(3);
    c.h(0);
    c.h(1);
    const Distribution dist = exact_probabilities(c);
    for (uint64_t j = 0; j < 4; ++j) {
      CHECK(dist.probs[j] == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(dist.probs[4 + j] == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("the 2x2 sample image produces the expected FRQI distribution") {
  const AngleVector angles = sample_2x2_angles();
  for (bool mary : {false, true}) {
    const Circuit c = mary ? build_mary_circuit(angles) : build_mcry_circuit(angles);
    const Distribution dist = exact_probabilities(c);
    for (uint64_t j = 0; j < 4; ++j) {
      const double cos2 = std::pow(std::cos(angles.thetas[j]), 2) / 4.0;
      const double sin2 = std::pow(std::sin(angles.thetas[j]), 2) / 4.0;
      CHECK(dist.probs[j] == doctest::Approx(cos2).epsilon(1e-10));
      CHECK(dist.probs[4 + j] == doctest::Approx(sin2).epsilon(1e-10));
    }
  }
}

TEST_CASE("the qubit cap is enforced and configurable") {
  Circuit big(27);
  big.h(0);
  CHECK_THROWS_AS((void)exact_probabilities(big), FrqiError);
  CHECK_THROWS_AS((void)sample(big, 1, std::nullopt, 0), FrqiError);

  Circuit medium(8);
  medium.h(0);
  CHECK_THROWS_AS((void)exact_probabilities(medium, SimLimits{5}), FrqiError);
  CHECK(exact_probabilities(medium, SimLimits{8}).probs.size() == 256);
}

TEST_CASE("noiseless sampling converges to the exact distribution") {
  const Circuit c = build_mary_circuit(sample_2x2_angles());
  const Distribution exact = exact_probabilities(c);
  const Counts counts = sample(c, 1'000'000, std::nullopt, 1234);
  CHECK(total_variation(exact, counts) < 0.01);
}

TEST_CASE("noiseless sampling passes a chi-squared goodness-of-fit test") {
  const Circuit c = build_mary_circuit(sample_2x2_angles());
  const Distribution exact = exact_probabilities(c);
  const uint64_t shots = 100'000;
  const Counts counts = sample(c, shots, std::nullopt, 777);

  double chi2 = 0.0;
  int df = -1;
  for (uint64_t s = 0; s < exact.dim(); ++s) {
    const double expected = exact.probs[s] * static_cast<double>(shots);
    const auto it = counts.histogram.find(s);
    const double observed = it == counts.histogram.end() ? 0.0 : static_cast<double>(it->second);
    if (expected < 1e-9) {
      CHECK(observed == 0.0);  // zero-probability states never fire
      continue;
    }
    chi2 += (observed - expected) * (observed - expected) / expected;
    ++df;
  }
  REQUIRE(df >= 1);
  REQUIRE(df <= 10);
  CHECK(chi2 < kChi2Crit[df]);
}

TEST_CASE("single-shot sampling returns one bitstring") {
  const Circuit c = build_mary_circuit(sample_2x2_angles());
  const Counts counts = sample(c, 1, std::nullopt, 5);
  CHECK(counts.shots == 1);
  CHECK(counts.histogram.size() == 1);
  CHECK(counts.histogram.begin()->second == 1);
}

TEST_CASE("certain readout flips map the identity circuit to all ones") {
  Circuit c(3);
  c.id(0);
  NoiseModel noise;
  noise.p_meas = 1.0;
  const Counts counts = sample(c, 64, noise, 9);
  REQUIRE(counts.histogram.size() == 1);
  CHECK(counts.histogram.begin()->first == 0b111);
  CHECK(counts.histogram.begin()->second == 64);
}

TEST_CASE("a zero-probability noise model reproduces noiseless sampling bit-exactly") {
  const Circuit c = build_mary_circuit(sample_2x2_angles());
  NoiseModel zero;
  const Counts with_model = sample(c, 4096, zero, 42);
  const Counts without = sample(c, 4096, std::nullopt, 42);
  CHECK(with_model.histogram == without.histogram);
}

TEST_CASE("sampling is deterministic per seed and varies across seeds") {
  const Circuit c = lower(build_mary_circuit(sample_2x2_angles()));
  NoiseModel noise;
  noise.p_meas = 0.1;
  noise.p_gate = 0.1;
  const Counts a = sample(c, 2048, noise, 7);
  const Counts b = sample(c, 2048, noise, 7);
  const Counts other = sample(c, 2048, noise, 8);
  CHECK(a.histogram == b.histogram);
  CHECK(a.histogram != other.histogram);
  uint64_t total = 0;
  for (const auto& [state, count] : a.histogram) total += count;
  CHECK(total == 2048);
}

TEST_CASE("zero shots are rejected") {
  Circuit c(1);
  c.h(0);
  CHECK_THROWS_AS((void)sample(c, 0, std::nullopt, 0), FrqiError);
}

TEST_CASE("noise-free calibration is the identity matrix") {
  const CalibrationMatrix cal = build_calibration(2, NoiseModel{}, 1024, 3);
  for (uint64_t r = 0; r < 4; ++r) {
    for (uint64_t c = 0; c < 4; ++c) {
      CHECK(cal.at(r, c) == (r == c ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("single-qubit calibration matches the analytic flip channel") {
  NoiseModel noise;
  noise.p_meas = 0.1;
  const uint64_t shots = 100'000;
  const CalibrationMatrix cal = build_calibration(1, noise, shots, 11);
  const double sigma = std::sqrt(0.1 * 0.9 / static_cast<double>(shots));
  CHECK(std::abs(cal.at(0, 0) - 0.9) < 3 * sigma);
  CHECK(std::abs(cal.at(1, 0) - 0.1) < 3 * sigma);
  CHECK(std::abs(cal.at(0, 1) - 0.1) < 3 * sigma);
  CHECK(std::abs(cal.at(1, 1) - 0.9) < 3 * sigma);
}

TEST_CASE("calibration columns sum to one") {
  NoiseModel noise;
  noise.p_meas = 0.07;
  noise.p_gate = 0.05;
  const CalibrationMatrix cal = build_calibration(3, noise, 2048, 21);
  for (uint64_t c = 0; c < cal.dim(); ++c) {
    double total = 0.0;
    for (uint64_t r = 0; r < cal.dim(); ++r) total += cal.at(r, c);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("analytic readout calibration has the product form") {
  const CalibrationMatrix cal = analytic_readout_calibration(2, 0.1);
  CHECK(cal.at(0, 0) == doctest::Approx(0.81));
  CHECK(cal.at(3, 0) == doctest::Approx(0.01));
  CHECK(cal.at(1, 0) == doctest::Approx(0.09));
  CHECK(cal.at(0, 3) == doctest::Approx(0.01));
}

TEST_CASE("mitigation with an identity calibration returns the empirical distribution") {
  Counts counts;
  counts.shots = 100;
  counts.histogram = {{0, 25}, {1, 75}};
  CalibrationMatrix identity;
  identity.num_qubits = 1;
  identity.m = {1, 0, 0, 1};
  const Distribution out = mitigate(counts, identity);
  CHECK(out.probs[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(out.probs[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("mitigation exactly inverts the analytic flip channel") {
  const CalibrationMatrix cal = analytic_readout_calibration(1, 0.1);
  Distribution truth;
  truth.num_qubits = 1;
  truth.probs = {0.7, 0.3};
  const Distribution forward = apply_channel(cal, truth);
  CHECK(forward.probs[0] == doctest::Approx(0.66).epsilon(1e-12));
  const Distribution recovered = mitigate(forward, cal);
  CHECK(std::abs(recovered.probs[0] - 0.7) < 1e-9);
  CHECK(std::abs(recovered.probs[1] - 0.3) < 1e-9);
}

TEST_CASE("mitigation inverts measurement-only noise on exact distributions") {
  std::mt19937_64 rng(31);
  Distribution truth;
  truth.num_qubits = 3;
  truth.probs.resize(8);
  double total = 0.0;
  for (auto& p : truth.probs) {
    p = static_cast<double>(rng() % 1000 + 1);
    total += p;
  }
  for (auto& p : truth.probs) p /= total;

  const CalibrationMatrix cal = analytic_readout_calibration(3, 0.08);
  const Distribution recovered = mitigate(apply_channel(cal, truth), cal);
  for (uint64_t i = 0; i < 8; ++i) {
    CHECK(std::abs(recovered.probs[i] - truth.probs[i]) < 1e-6);
  }
}

TEST_CASE("mitigation never returns negative probabilities") {
  // An empirical vector far outside the channel's range forces clamping.
  Counts counts;
  counts.shots = 100;
  counts.histogram = {{0, 100}};
  const CalibrationMatrix cal = analytic_readout_calibration(2, 0.25);
  const Distribution out = mitigate(counts, cal);
  double total = 0.0;
  for (double p : out.probs) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("readout mitigation lowers the decoded error under noise") {
  Image image;
  image.side = 2;
  image.pixels = {10, 85, 170, 255};
  const Circuit low = lower(build_mary_circuit(gray_to_angles(image, EncodingMode::Linear)));

  NoiseModel noise;
  noise.p_meas = 0.1;
  noise.p_gate = 0.1;

  std::vector<double> raw_diffs, mitigated_diffs;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const Counts counts = sample(low, 8192, noise, seed);
    const Distribution raw = counts_to_distribution(counts, 3);
    const CalibrationMatrix cal = build_calibration(3, noise, 8192, seed + 1000);
    const Distribution fixed = mitigate(counts, cal);

    const Image raw_img =
        probs_to_image(raw, 1, EncodingMode::Linear, DecodeVariant::Ratio).image;
    const Image fixed_img =
        probs_to_image(fixed, 1, EncodingMode::Linear, DecodeVariant::Ratio).image;
    raw_diffs.push_back(relative_difference(image, raw_img));
    mitigated_diffs.push_back(relative_difference(image, fixed_img));
  }
  std::sort(raw_diffs.begin(), raw_diffs.end());
  std::sort(mitigated_diffs.begin(), mitigated_diffs.end());
  CHECK(mitigated_diffs[2] < raw_diffs[2]);  // medians over 5 seeds
}

TEST_CASE("ancilla marginalization preserves total probability") {
  const AngleVector angles = [] {
    AngleVector a;
    a.n = 5;
    a.thetas.assign(1024, 0.3);
    return a;
  }();
  const Circuit c = build_mary_circuit(angles);
  const Distribution full = exact_probabilities(c);
  const Distribution reduced = marginalize_qubits(full, c.layout.ancillas);
  CHECK(reduced.num_qubits == 11);
  CHECK(reduced.sum() == doctest::Approx(full.sum()).epsilon(1e-12));
}

TEST_CASE("mitigation validates dimensions") {
  Counts counts;
  counts.shots = 1;
  counts.histogram = {{9, 1}};
  CalibrationMatrix cal;
  cal.num_qubits = 1;
  cal.m = {1, 0, 0, 1};
  CHECK_THROWS_AS((void)mitigate(counts, cal), FrqiError);
}
