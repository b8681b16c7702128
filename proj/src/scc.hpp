#pragma once

#include <cstdint>
#include <vector>

namespace specbench::detail {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

struct SccResult {
  /// Component index per node; components are numbered in reverse
  /// topological order (Tarjan completion order).
  std::vector<std::uint32_t> component;
  std::uint32_t count = 0;
};

/// Iterative Tarjan over the nodes reachable from `roots` (all nodes when
/// `roots` is empty). Unvisited nodes get component UINT32_MAX.
SccResult tarjan(const Adjacency& succ, const std::vector<std::uint32_t>& roots = {});

/// Whether a component has a cycle (more than one node, or a self-loop).
std::vector<char> nontrivial_components(const Adjacency& succ, const SccResult& scc);

}  // namespace specbench::detail
