#pragma once

#include <cstdint>
#include <vector>

#include "frqi/circuit.hpp"
#include "frqi/coupling_map.hpp"
#include "frqi/distribution.hpp"

namespace frqi {

inline constexpr uint64_t kDefaultGateBudget = 150'000'000;

struct LowerOptions {
  uint64_t gate_budget = kDefaultGateBudget;
};

bool is_basis_kind(GateKind kind);
bool is_basis_circuit(const Circuit& circuit);

// Upper bound on the basis-gate count of lower(circuit).
uint64_t estimate_lowered_size(const Circuit& circuit);

// Rewrites every gate into the basis set {I, X, SX, Rz, CX}. Idempotent on
// basis circuits; preserves qubit count and entrywise unitary magnitudes.
Circuit lower(const Circuit& circuit, const LowerOptions& options = {});

// The intermediate two-control stage: 2 CX + 3 CU on qubits (c0, c1, target).
Circuit decompose_mcry2_cu(double gamma);

// Exact textbook decompositions used as count baselines: 6 and 14 CX.
Circuit naive_toffoli();
Circuit naive_c3x();

struct Placement {
  enum class Kind { Auto, Fixed };
  Kind kind = Kind::Auto;
  std::vector<uint32_t> assignment;  // logical -> physical, Fixed only

  static Placement automatic() { return {}; }
  static Placement fixed(std::vector<uint32_t> assignment);
};

struct RoutedCircuit {
  Circuit circuit;                      // over map.num_qubits wires, CX on edges only
  std::vector<uint32_t> initial_layout; // logical -> physical
  std::vector<uint32_t> final_layout;   // logical -> physical after SWAPs
};

// Greedy router: walks one operand of each non-adjacent CX along a shortest
// path with SWAPs (each emitted as 3 CX). Input must be a basis circuit.
RoutedCircuit route(const Circuit& circuit, const CouplingMap& map,
                    const Placement& placement = Placement::automatic());

// Reads a physical-wire distribution back into logical qubit order.
Distribution unpermute_distribution(const Distribution& physical,
                                    const std::vector<uint32_t>& final_layout,
                                    uint32_t num_logical);

// Projects measured physical bitstrings onto the logical qubits.
Counts reduce_counts(const Counts& physical, const std::vector<uint32_t>& final_layout,
                     uint32_t num_logical);

}  // namespace frqi
