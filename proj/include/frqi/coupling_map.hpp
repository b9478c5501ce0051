#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace frqi {

// Undirected connectivity graph of a hardware backend.
struct CouplingMap {
  uint32_t num_qubits = 0;
  std::set<std::pair<uint32_t, uint32_t>> edges;  // normalized first < second

  void add_edge(uint32_t a, uint32_t b);
  bool has_edge(uint32_t a, uint32_t b) const;
  bool connected() const;
  std::vector<std::vector<uint32_t>> adjacency() const;

  static CouplingMap line(uint32_t n);
  static CouplingMap complete(uint32_t n);
};

// File format: first line is the qubit count, then one "a b" edge per line.
CouplingMap load_coupling_map(const std::string& path);
void save_coupling_map(const CouplingMap& map, const std::string& path);

}  // namespace frqi
