#pragma once

#include <cstdint>
#include <vector>

#include "frqi/circuit.hpp"
#include "frqi/image_codec.hpp"

namespace frqi {

enum class BuilderVariant { MCRY, MARY };

// One ancilla-folding step: target = AND of the controls (target starts |0>).
struct ScaffoldStep {
  GateKind kind;  // RCCX or RCCCX
  std::vector<uint32_t> controls;
  uint32_t target;
};

// Qubit plan for the MARY construction at image exponent n.
// Qubit indices: positions 0..2n-1, gray = 2n, ancillas above the gray qubit.
struct LayoutPlan {
  uint32_t n = 0;
  uint32_t num_position = 0;
  uint32_t num_ancilla = 0;
  uint32_t mary_arity = 0;
  std::vector<uint32_t> mary_lines;     // control qubits of every MARY gate
  std::vector<ScaffoldStep> scaffold;   // compute order; mirrored after each MARY

  uint32_t num_qubits() const { return num_position + 1 + num_ancilla; }
  uint32_t gray_qubit() const { return num_position; }
};

LayoutPlan plan_mary_layout(uint32_t n);

struct BuilderLimits {
  uint32_t max_mcry_n = 8;
};

// Baseline: H superposition, transition-mask X addressing, one MCRY(2*theta_i)
// per pixel controlled on all position qubits, gray qubit target.
Circuit build_mcry_circuit(const AngleVector& angles, const BuilderLimits& limits = {});

// Same skeleton with MARY gates and, for n >= 5, ancilla AND-chain scaffolding
// computed before and uncomputed after every MARY. Supported n: 1..9 and 13.
Circuit build_mary_circuit(const AngleVector& angles);

// Gate sequence on `arity` qubits (controls 0..arity-2, target arity-1) whose
// unitary magnitudes equal the (arity-1)-controlled Ry(gamma).
// Supported arities: 3, 5, 7, 8, 9, 10.
Circuit decompose_mary(uint32_t arity, double gamma);

// Relative-phase Toffoli (Margolus), 3 CX; qubits (c0, c1, target).
Circuit decompose_rccx();

// Relative-phase triple-controlled X, 6 CX; qubits (c0, c1, c2, target).
Circuit decompose_rcccx();

// Exact uniformly-controlled rotation selecting the all-ones control pattern:
// applies R(gamma) about `axis` ('y' or 'z') on target iff all controls are 1.
// Emitted as the standard gray-code ladder: 2^k rotations and 2^k CX.
void emit_selector_rotation(Circuit& circuit, char axis, double gamma,
                            std::span<const uint32_t> controls, uint32_t target);

}  // namespace frqi
