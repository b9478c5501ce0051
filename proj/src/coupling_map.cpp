#include "frqi/coupling_map.hpp"

#include <fstream>
#include <queue>
#include <sstream>

#include "frqi/errors.hpp"

namespace frqi {

void CouplingMap::add_edge(uint32_t a, uint32_t b) {
  if (a == b || a >= num_qubits || b >= num_qubits) {
    throw FrqiError(errc::bad_argument, "invalid edge");
  }
  edges.insert({std::min(a, b), std::max(a, b)});
}

bool CouplingMap::has_edge(uint32_t a, uint32_t b) const {
  return edges.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<std::vector<uint32_t>> CouplingMap::adjacency() const {
  std::vector<std::vector<uint32_t>> adj(num_qubits);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

bool CouplingMap::connected() const {
  if (num_qubits == 0) return false;
  const auto adj = adjacency();
  std::vector<bool> seen(num_qubits, false);
  std::queue<uint32_t> frontier;
  frontier.push(0);
  seen[0] = true;
  uint32_t visited = 1;
  while (!frontier.empty()) {
    const uint32_t u = frontier.front();
    frontier.pop();
    for (uint32_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        frontier.push(v);
      }
    }
  }
  return visited == num_qubits;
}

CouplingMap CouplingMap::line(uint32_t n) {
  CouplingMap map;
  map.num_qubits = n;
  for (uint32_t i = 0; i + 1 < n; ++i) map.add_edge(i, i + 1);
  return map;
}

CouplingMap CouplingMap::complete(uint32_t n) {
  CouplingMap map;
  map.num_qubits = n;
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = i + 1; j < n; ++j) map.add_edge(i, j);
  }
  return map;
}

CouplingMap load_coupling_map(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FrqiError(errc::io_error, "cannot open " + path);
  CouplingMap map;
  if (!(is >> map.num_qubits)) {
    throw FrqiError(errc::bad_argument, path + ": missing qubit count");
  }
  uint32_t a, b;
  while (is >> a >> b) map.add_edge(a, b);
  return map;
}

void save_coupling_map(const CouplingMap& map, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw FrqiError(errc::io_error, "cannot open " + path + " for writing");
  os << map.num_qubits << "\n";
  for (const auto& [a, b] : map.edges) os << a << " " << b << "\n";
}

}  // namespace frqi
