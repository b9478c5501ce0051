#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace frqi {

// Exact or empirical probabilities over the 2^q computational basis states.
// Index convention: qubit 0 is the least significant bit of the state index.
struct Distribution {
  uint32_t num_qubits = 0;
  std::vector<double> probs;

  uint64_t dim() const { return uint64_t{1} << num_qubits; }
  double sum() const;
};

// Shot histogram over basis-state indices.
struct Counts {
  uint64_t shots = 0;
  std::map<uint64_t, uint64_t> histogram;
};

Distribution counts_to_distribution(const Counts& counts, uint32_t num_qubits);

// Sums probabilities over the given qubits, removing them from the index.
// The qubit list must be sorted ascending and duplicate-free.
Distribution marginalize_qubits(const Distribution& dist, const std::vector<uint32_t>& qubits);

}  // namespace frqi
