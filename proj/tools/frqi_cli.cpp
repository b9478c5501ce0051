#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "frqi/errors.hpp"
#include "frqi/frqi_builder.hpp"
#include "frqi/image_codec.hpp"
#include "frqi/simulator.hpp"
#include "frqi/transpiler.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitResource = 2;
constexpr int kExitData = 3;

int exit_code_for(frqi::errc code) {
  switch (code) {
    case frqi::errc::too_large:
    case frqi::errc::too_many_qubits:
    case frqi::errc::gate_budget_exceeded:
      return kExitResource;
    case frqi::errc::bad_argument:
    case frqi::errc::zero_shots:
    case frqi::errc::unsupported_arity:
    case frqi::errc::unknown_gate_kind:
      return kExitUsage;
    default:
      return kExitData;
  }
}

bool is_resource_error(frqi::errc code) { return exit_code_for(code) == kExitResource; }

struct PipelineConfig {
  frqi::BuilderVariant builder = frqi::BuilderVariant::MARY;
  frqi::EncodingMode mode = frqi::EncodingMode::Linear;
  frqi::DecodeVariant decode = frqi::DecodeVariant::Ratio;
  std::string shots = "exact";  // "exact" or a shot count
  double p_meas = 0.0;
  double p_gate = 0.0;
  std::string mitigation = "none";  // none | own | model:<file>
  uint64_t cal_shots = 8192;
  std::string coupling_map;
  uint64_t seed = 0;
  uint64_t gate_budget = frqi::kDefaultGateBudget;
  std::string dump_circuit;  // write the executed basis circuit here

  bool exact() const { return shots == "exact"; }
  uint64_t shot_count() const { return std::stoull(shots); }
  bool noisy() const { return p_meas > 0.0 || p_gate > 0.0; }
};

void add_config_flags(CLI::App* cmd, PipelineConfig& config) {
  cmd->add_option("--builder", config.builder, "circuit construction: mcry|mary")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, frqi::BuilderVariant>{{"mcry", frqi::BuilderVariant::MCRY},
                                                      {"mary", frqi::BuilderVariant::MARY}},
          CLI::ignore_case));
  cmd->add_option("--mode", config.mode, "gray-to-angle transform: linear|arcsin")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, frqi::EncodingMode>{{"linear", frqi::EncodingMode::Linear},
                                                    {"arcsin", frqi::EncodingMode::Arcsin}},
          CLI::ignore_case));
  cmd->add_option("--decode", config.decode, "probability decoder: ratio|scaled")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, frqi::DecodeVariant>{{"ratio", frqi::DecodeVariant::Ratio},
                                                     {"scaled", frqi::DecodeVariant::Scaled}},
          CLI::ignore_case));
  cmd->add_option("--shots", config.shots, "shot count, or 'exact' for exact probabilities");
  cmd->add_option("--p-meas", config.p_meas, "readout bit-flip probability")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p-gate", config.p_gate, "depolarizing probability on X/CX gates")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--mitigation", config.mitigation,
                  "readout mitigation: none | own | model:<calibration.json>");
  cmd->add_option("--cal-shots", config.cal_shots, "shots per basis state for 'own' calibration");
  cmd->add_option("--coupling-map", config.coupling_map, "route onto this coupling map file");
  cmd->add_option("--seed", config.seed, "PRNG seed");
  cmd->add_option("--gate-budget", config.gate_budget, "max basis gates the transpiler may emit");
  cmd->add_option("--dump-circuit", config.dump_circuit,
                  "write the executed basis circuit to this text file");
}

void validate_config(const PipelineConfig& config) {
  if (!config.exact()) {
    uint64_t shots = 0;
    try {
      shots = config.shot_count();
    } catch (const std::exception&) {
      throw frqi::FrqiError(frqi::errc::bad_argument, "--shots must be a number or 'exact'");
    }
    if (shots == 0) {
      throw frqi::FrqiError(frqi::errc::zero_shots, "--shots must be >= 1");
    }
  } else if (config.noisy()) {
    throw frqi::FrqiError(frqi::errc::bad_argument, "exact probabilities forbid noise");
  }
  if (config.mitigation != "none" && config.exact()) {
    throw frqi::FrqiError(frqi::errc::bad_argument, "mitigation requires sampled shots");
  }
  if (config.mitigation != "none" && config.mitigation != "own" &&
      config.mitigation.rfind("model:", 0) != 0) {
    throw frqi::FrqiError(frqi::errc::bad_argument, "--mitigation must be none, own or model:<file>");
  }
}

std::string to_bitstring(uint64_t state, uint32_t num_qubits) {
  std::string bits(num_qubits, '0');
  for (uint32_t q = 0; q < num_qubits; ++q) {
    if ((state >> q) & 1u) bits[num_qubits - 1 - q] = '1';
  }
  return bits;
}

json calibration_to_json(const frqi::CalibrationMatrix& cal, double p_meas, double p_gate,
                         uint64_t shots_per_state) {
  json j;
  j["num_qubits"] = cal.num_qubits;
  j["dim"] = cal.dim();
  j["p_meas"] = p_meas;
  j["p_gate"] = p_gate;
  j["shots_per_state"] = shots_per_state;
  json rows = json::array();
  for (uint64_t r = 0; r < cal.dim(); ++r) {
    json row = json::array();
    for (uint64_t c = 0; c < cal.dim(); ++c) row.push_back(cal.at(r, c));
    rows.push_back(row);
  }
  j["matrix"] = rows;  // matrix[r][c] = P(measured r | prepared c)
  return j;
}

frqi::CalibrationMatrix calibration_from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw frqi::FrqiError(frqi::errc::io_error, "cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw frqi::FrqiError(frqi::errc::bad_argument, std::string("bad calibration json: ") + e.what());
  }
  frqi::CalibrationMatrix cal;
  cal.num_qubits = j.at("num_qubits").get<uint32_t>();
  const uint64_t dim = cal.dim();
  cal.m.assign(dim * dim, 0.0);
  const auto& rows = j.at("matrix");
  if (rows.size() != dim) {
    throw frqi::FrqiError(frqi::errc::dim_mismatch, "calibration matrix has wrong dimension");
  }
  for (uint64_t r = 0; r < dim; ++r) {
    for (uint64_t c = 0; c < dim; ++c) cal.at(r, c) = rows[r][c].get<double>();
  }
  return cal;
}

struct PipelineResult {
  frqi::Image decoded;
  std::vector<uint32_t> zero_mass_pixels;
  uint64_t depth = 0;
  std::map<frqi::GateKind, uint64_t> counts;
  uint64_t cx = 0;
  uint64_t total_gates = 0;
  uint32_t logical_qubits = 0;
  uint32_t executed_qubits = 0;
  frqi::Counts raw_counts;
  std::optional<frqi::Distribution> exact_dist;         // logical, decode space
  std::optional<frqi::Distribution> mitigated_decode;   // logical, decode space
  bool sampled = false;
};

PipelineResult run_pipeline(const PipelineConfig& config, const frqi::Image& input) {
  validate_config(config);
  const frqi::AngleVector angles = frqi::gray_to_angles(input, config.mode);
  const uint32_t n = angles.n;

  frqi::Circuit logical = config.builder == frqi::BuilderVariant::MCRY
                              ? frqi::build_mcry_circuit(angles)
                              : frqi::build_mary_circuit(angles);
  frqi::Circuit executed = frqi::lower(logical, {config.gate_budget});
  executed.layout = logical.layout;

  std::vector<uint32_t> final_layout;
  if (!config.coupling_map.empty()) {
    const frqi::CouplingMap map = frqi::load_coupling_map(config.coupling_map);
    frqi::RoutedCircuit routed = frqi::route(executed, map);
    final_layout = routed.final_layout;
    executed = std::move(routed.circuit);
  }

  if (!config.dump_circuit.empty()) {
    frqi::save_circuit(executed, config.dump_circuit);
  }

  PipelineResult result;
  result.logical_qubits = logical.num_qubits();
  result.executed_qubits = executed.num_qubits();
  result.depth = frqi::depth(executed);
  result.counts = frqi::gate_counts(executed);
  result.cx = frqi::cx_count(executed);
  result.total_gates = executed.size();

  frqi::Distribution decode_dist;
  if (config.exact()) {
    frqi::Distribution dist = frqi::exact_probabilities(executed);
    if (!final_layout.empty()) {
      dist = frqi::unpermute_distribution(dist, final_layout, logical.num_qubits());
    }
    decode_dist = frqi::marginalize_qubits(dist, logical.layout.ancillas);
    result.exact_dist = decode_dist;
  } else {
    result.sampled = true;
    std::optional<frqi::NoiseModel> noise;
    if (config.noisy()) {
      noise = frqi::NoiseModel{};
      noise->p_meas = config.p_meas;
      noise->p_gate = config.p_gate;
    }
    const frqi::Counts physical = frqi::sample(executed, config.shot_count(), noise, config.seed);
    // Measured bits of interest are the logical qubits; mitigation happens in
    // that register, matching how readout calibration is run on hardware.
    result.raw_counts = final_layout.empty()
                            ? physical
                            : frqi::reduce_counts(physical, final_layout, logical.num_qubits());

    frqi::Distribution empirical =
        frqi::counts_to_distribution(result.raw_counts, logical.num_qubits());
    if (config.mitigation != "none") {
      frqi::CalibrationMatrix cal;
      if (config.mitigation == "own") {
        frqi::NoiseModel cal_noise;
        cal_noise.p_meas = config.p_meas;
        cal_noise.p_gate = config.p_gate;
        cal = frqi::build_calibration(logical.num_qubits(), cal_noise, config.cal_shots,
                                      config.seed + 0x9E37u);
      } else {
        cal = calibration_from_json_file(config.mitigation.substr(6));
      }
      const frqi::Distribution mitigated = frqi::mitigate(result.raw_counts, cal);
      result.mitigated_decode = frqi::marginalize_qubits(mitigated, logical.layout.ancillas);
      decode_dist = *result.mitigated_decode;
    } else {
      decode_dist = frqi::marginalize_qubits(empirical, logical.layout.ancillas);
    }
  }

  frqi::DecodeResult decoded = frqi::probs_to_image(decode_dist, n, config.mode, config.decode);
  result.decoded = std::move(decoded.image);
  result.zero_mass_pixels = std::move(decoded.zero_mass_pixels);
  return result;
}

json gate_counts_to_json(const std::map<frqi::GateKind, uint64_t>& counts) {
  json j = json::object();
  for (const auto& [kind, count] : counts) j[frqi::to_string(kind)] = count;
  return j;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

frqi::Image gradient_image(uint32_t n) {
  frqi::Image image;
  image.side = uint32_t{1} << n;
  const uint64_t count = uint64_t{1} << (2 * n);
  image.pixels.resize(count);
  for (uint64_t i = 0; i < count; ++i) {
    image.pixels[i] = static_cast<uint8_t>((i * 255) / (count - 1));
  }
  return image;
}

int cmd_roundtrip(const PipelineConfig& config, const std::string& input_path,
                  const std::string& out_image, const std::string& out_metrics) {
  const auto start = std::chrono::steady_clock::now();
  const frqi::Image input = frqi::load_pgm(input_path);
  const PipelineResult result = run_pipeline(config, input);
  const double diff = frqi::relative_difference(input, result.decoded);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  frqi::save_pgm(result.decoded, out_image);

  json metrics;
  metrics["command"] = "roundtrip";
  metrics["input"] = input_path;
  metrics["output"] = out_image;
  metrics["builder"] = config.builder == frqi::BuilderVariant::MCRY ? "mcry" : "mary";
  metrics["mode"] = config.mode == frqi::EncodingMode::Linear ? "linear" : "arcsin";
  metrics["decode"] = config.decode == frqi::DecodeVariant::Ratio ? "ratio" : "scaled";
  metrics["shots"] = config.shots;
  metrics["seed"] = config.seed;
  metrics["p_meas"] = config.p_meas;
  metrics["p_gate"] = config.p_gate;
  metrics["mitigation"] = config.mitigation;
  metrics["n"] = frqi::side_exponent(input.side);
  metrics["logical_qubits"] = result.logical_qubits;
  metrics["executed_qubits"] = result.executed_qubits;
  metrics["relative_difference"] = diff;
  metrics["depth"] = result.depth;
  metrics["gate_counts"] = gate_counts_to_json(result.counts);
  metrics["cx_count"] = result.cx;
  metrics["total_gates"] = result.total_gates;
  metrics["zero_mass_pixels"] = result.zero_mass_pixels;
  metrics["wall_time_s"] = elapsed;

  if (out_metrics.empty()) {
    std::cout << metrics.dump(2) << "\n";
  } else {
    std::ofstream os(out_metrics);
    os << metrics.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_counts(const PipelineConfig& config, const std::string& input_path,
               const std::string& out_path) {
  const frqi::Image input = frqi::load_pgm(input_path);
  const PipelineResult result = run_pipeline(config, input);

  json j;
  j["command"] = "counts";
  j["shots"] = config.shots;
  j["seed"] = config.seed;
  if (result.sampled) {
    json counts = json::object();
    for (const auto& [state, count] : result.raw_counts.histogram) {
      counts[to_bitstring(state, result.logical_qubits)] = count;
    }
    j["counts"] = counts;
    if (result.mitigated_decode) {
      j["mitigated_distribution"] = result.mitigated_decode->probs;
    }
  } else {
    j["distribution"] = result.exact_dist->probs;
  }

  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream os(out_path);
    os << j.dump(2) << "\n";
  }
  return kExitOk;
}

struct SweepRow {
  uint32_t n;
  std::string variant;
  uint32_t qubits = 0;
  uint64_t depth = 0;
  uint64_t cx = 0;
  uint64_t gates = 0;
  std::string diff_rel;  // empty in construct-only mode
  double time_s = 0.0;
  std::string status = "ok";
};

void write_sweep_csv(std::ostream& os, const std::string& schema,
                     const std::vector<SweepRow>& rows, bool with_shots_seed,
                     const std::vector<std::pair<uint64_t, uint64_t>>& shots_seed) {
  os << "# " << schema << "\n";
  os << "n,variant,qubits";
  if (with_shots_seed) os << ",shots,seed";
  os << ",depth,cx_count,total_gates,diff_rel,time_s,status\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    os << row.n << "," << row.variant << "," << row.qubits;
    if (with_shots_seed) os << "," << shots_seed[i].first << "," << shots_seed[i].second;
    os << "," << row.depth << "," << row.cx << "," << row.gates << "," << row.diff_rel << ","
       << format_double(row.time_s) << "," << row.status << "\n";
  }
}

frqi::Image image_for_n(const std::string& image_path, uint32_t n) {
  const uint32_t side = uint32_t{1} << n;
  if (image_path.empty()) return gradient_image(n);
  frqi::Image source = frqi::load_pgm(image_path);
  if (source.side < side) {
    throw frqi::FrqiError(frqi::errc::incompatible_sides,
                          "source image smaller than requested sweep size");
  }
  return source.side == side ? source : frqi::downscale(source, side);
}

SweepRow sweep_one(PipelineConfig config, frqi::BuilderVariant variant, uint32_t n,
                   const std::string& image_path, bool construct_only) {
  SweepRow row;
  row.n = n;
  row.variant = variant == frqi::BuilderVariant::MCRY ? "mcry" : "mary";
  const auto start = std::chrono::steady_clock::now();
  try {
    const frqi::Image input = image_for_n(image_path, n);
    config.builder = variant;
    if (construct_only) {
      const frqi::AngleVector angles = frqi::gray_to_angles(input, config.mode);
      frqi::Circuit logical = variant == frqi::BuilderVariant::MCRY
                                  ? frqi::build_mcry_circuit(angles)
                                  : frqi::build_mary_circuit(angles);
      frqi::Circuit lowered = frqi::lower(logical, {config.gate_budget});
      row.qubits = lowered.num_qubits();
      row.depth = frqi::depth(lowered);
      row.cx = frqi::cx_count(lowered);
      row.gates = lowered.size();
    } else {
      const PipelineResult result = run_pipeline(config, input);
      row.qubits = result.executed_qubits;
      row.depth = result.depth;
      row.cx = result.cx;
      row.gates = result.total_gates;
      row.diff_rel = format_double(frqi::relative_difference(input, result.decoded));
    }
  } catch (const frqi::FrqiError& e) {
    row.status = is_resource_error(e.code()) ? "OOM-guarded" : std::string("error:") + frqi::to_string(e.code());
  }
  row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

int cmd_sweep_size(const PipelineConfig& config, uint32_t n_min, uint32_t n_max,
                   const std::string& image_path, bool construct_only,
                   const std::string& out_path) {
  std::vector<SweepRow> rows;
  for (uint32_t n = n_min; n <= n_max; ++n) {
    rows.push_back(sweep_one(config, frqi::BuilderVariant::MCRY, n, image_path, construct_only));
    rows.push_back(sweep_one(config, frqi::BuilderVariant::MARY, n, image_path, construct_only));
  }
  if (out_path.empty()) {
    write_sweep_csv(std::cout, "frqi-sweep-size v1", rows, false, {});
  } else {
    std::ofstream os(out_path);
    write_sweep_csv(os, "frqi-sweep-size v1", rows, false, {});
  }
  return kExitOk;
}

int cmd_sweep_shots(const PipelineConfig& config, uint32_t n, const std::string& shots_list,
                    uint32_t num_seeds, const std::string& image_path,
                    const std::string& out_path) {
  std::vector<uint64_t> shot_values;
  std::stringstream ss(shots_list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) shot_values.push_back(std::stoull(token));
  }
  if (shot_values.empty()) {
    throw frqi::FrqiError(frqi::errc::bad_argument, "--shots-list must name at least one count");
  }

  std::vector<SweepRow> rows;
  std::vector<std::pair<uint64_t, uint64_t>> shots_seed;
  for (uint64_t shots : shot_values) {
    for (uint32_t s = 0; s < num_seeds; ++s) {
      PipelineConfig per = config;
      per.shots = std::to_string(shots);
      per.seed = config.seed + s;
      rows.push_back(sweep_one(per, config.builder, n, image_path, false));
      shots_seed.push_back({shots, per.seed});
    }
  }
  if (out_path.empty()) {
    write_sweep_csv(std::cout, "frqi-sweep-shots v1", rows, true, shots_seed);
  } else {
    std::ofstream os(out_path);
    write_sweep_csv(os, "frqi-sweep-shots v1", rows, true, shots_seed);
  }
  return kExitOk;
}

int cmd_calibrate(uint32_t num_qubits, double p_meas, double p_gate, uint64_t cal_shots,
                  uint64_t seed, bool noise_free_prep, const std::string& out_path) {
  frqi::NoiseModel noise;
  noise.p_meas = p_meas;
  noise.p_gate = p_gate;
  frqi::CalibrationOptions options;
  options.gate_noise_on_prep = !noise_free_prep;
  const frqi::CalibrationMatrix cal =
      frqi::build_calibration(num_qubits, noise, cal_shots, seed, options);
  const json j = calibration_to_json(cal, p_meas, p_gate, cal_shots);
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream os(out_path);
    os << j.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FRQI image encoding experiments"};
  app.require_subcommand(1);

  PipelineConfig config;

  std::string input_path, out_path, metrics_path, image_path;
  uint32_t n_min = 1, n_max = 4, sweep_n = 1, num_seeds = 5, cal_qubits = 3;
  bool construct_only = false, noise_free_prep = false;
  std::string shots_list = "8192";

  CLI::App* roundtrip = app.add_subcommand("roundtrip", "encode, run, decode, compare");
  add_config_flags(roundtrip, config);
  roundtrip->add_option("input", input_path, "input PGM image")->required();
  roundtrip->add_option("--out", out_path, "output PGM path")->required();
  roundtrip->add_option("--metrics", metrics_path, "metrics JSON path (default: stdout)");

  CLI::App* counts = app.add_subcommand("counts", "dump raw/mitigated counts");
  add_config_flags(counts, config);
  counts->add_option("input", input_path, "input PGM image")->required();
  counts->add_option("--out", out_path, "output JSON path (default: stdout)");

  CLI::App* sweep_size = app.add_subcommand("sweep-size", "depth/CX/fidelity vs image size");
  add_config_flags(sweep_size, config);
  sweep_size->add_option("--n-min", n_min, "smallest image exponent");
  sweep_size->add_option("--n-max", n_max, "largest image exponent");
  sweep_size->add_option("--image", image_path, "source PGM (downscaled per n; default: gradient)");
  sweep_size->add_flag("--construct-only", construct_only, "build and lower without simulating");
  sweep_size->add_option("--out", out_path, "CSV path (default: stdout)");

  CLI::App* sweep_shots = app.add_subcommand("sweep-shots", "fidelity vs shot count");
  add_config_flags(sweep_shots, config);
  sweep_shots->add_option("--n", sweep_n, "image exponent");
  sweep_shots->add_option("--shots-list", shots_list, "comma-separated shot counts");
  sweep_shots->add_option("--seeds", num_seeds, "seeds per shot count");
  sweep_shots->add_option("--image", image_path, "source PGM (default: gradient)");
  sweep_shots->add_option("--out", out_path, "CSV path (default: stdout)");

  CLI::App* calibrate = app.add_subcommand("calibrate", "build a readout calibration matrix");
  calibrate->add_option("--qubits", cal_qubits, "number of measured qubits")->required();
  calibrate->add_option("--p-meas", config.p_meas, "readout bit-flip probability")->required();
  calibrate->add_option("--p-gate", config.p_gate, "depolarizing probability");
  calibrate->add_option("--cal-shots", config.cal_shots, "shots per basis state");
  calibrate->add_option("--seed", config.seed, "PRNG seed");
  calibrate->add_flag("--noise-free-prep", noise_free_prep,
                      "skip depolarizing noise on the X preparation gates");
  calibrate->add_option("--out", out_path, "output JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (roundtrip->parsed()) {
      return cmd_roundtrip(config, input_path, out_path, metrics_path);
    }
    if (counts->parsed()) {
      return cmd_counts(config, input_path, out_path);
    }
    if (sweep_size->parsed()) {
      if (n_min < 1 || n_max < n_min) {
        throw frqi::FrqiError(frqi::errc::bad_argument, "need 1 <= n-min <= n-max");
      }
      return cmd_sweep_size(config, n_min, n_max, image_path, construct_only, out_path);
    }
    if (sweep_shots->parsed()) {
      return cmd_sweep_shots(config, sweep_n, shots_list, num_seeds, image_path, out_path);
    }
    if (calibrate->parsed()) {
      return cmd_calibrate(cal_qubits, config.p_meas, config.p_gate, config.cal_shots, config.seed,
                           noise_free_prep, out_path);
    }
  } catch (const frqi::FrqiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
