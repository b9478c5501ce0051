#include "frqi/distribution.hpp"

#include <algorithm>
#include <numeric>

#include "frqi/errors.hpp"

namespace frqi {

double Distribution::sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

Distribution counts_to_distribution(const Counts& counts, uint32_t num_qubits) {
  if (counts.shots == 0) {
    throw FrqiError(errc::zero_shots, "cannot normalize an empty histogram");
  }
  Distribution dist;
  dist.num_qubits = num_qubits;
  dist.probs.assign(uint64_t{1} << num_qubits, 0.0);
  for (const auto& [state, count] : counts.histogram) {
    if (state >= dist.dim()) {
      throw FrqiError(errc::dim_mismatch, "histogram state exceeds basis size");
    }
    dist.probs[state] = static_cast<double>(count) / static_cast<double>(counts.shots);
  }
  return dist;
}

Distribution marginalize_qubits(const Distribution& dist, const std::vector<uint32_t>& qubits) {
  if (qubits.empty()) return dist;
  if (!std::is_sorted(qubits.begin(), qubits.end()) ||
      std::adjacent_find(qubits.begin(), qubits.end()) != qubits.end()) {
    throw FrqiError(errc::bad_argument, "qubit list must be sorted and unique");
  }
  if (qubits.back() >= dist.num_qubits) {
    throw FrqiError(errc::dim_mismatch, "qubit index out of range");
  }

  Distribution out;
  out.num_qubits = dist.num_qubits - static_cast<uint32_t>(qubits.size());
  out.probs.assign(uint64_t{1} << out.num_qubits, 0.0);
  for (uint64_t state = 0; state < dist.dim(); ++state) {
    uint64_t reduced = 0;
    uint32_t out_bit = 0;
    size_t drop = 0;
    for (uint32_t q = 0; q < dist.num_qubits; ++q) {
      if (drop < qubits.size() && qubits[drop] == q) {
        ++drop;
        continue;
      }
      reduced |= ((state >> q) & 1u) << out_bit;
      ++out_bit;
    }
    out.probs[reduced] += dist.probs[state];
  }
  return out;
}

}  // namespace frqi
