#include "scc.hpp"

#include <limits>

namespace specbench::detail {

namespace {
constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
}

SccResult tarjan(const Adjacency& succ, const std::vector<std::uint32_t>& roots) {
  const std::size_t n = succ.size();
  SccResult result;
  result.component.assign(n, kUnset);
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint32_t node;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0;

  auto visit = [&](std::uint32_t root) {
    if (index[root] != kUnset) return;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& out = succ[f.node];
      if (f.next_edge < out.size()) {
        std::uint32_t w = out[f.next_edge++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w] && index[w] < low[f.node]) {
          low[f.node] = index[w];
        }
        continue;
      }
      std::uint32_t v = f.node;
      call.pop_back();
      if (!call.empty() && low[v] < low[call.back().node]) low[call.back().node] = low[v];
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          result.component[w] = result.count;
        } while (w != v);
        ++result.count;
      }
    }
  };

  if (roots.empty()) {
    for (std::uint32_t v = 0; v < n; ++v) visit(v);
  } else {
    for (auto r : roots) visit(r);
  }
  return result;
}

std::vector<char> nontrivial_components(const Adjacency& succ, const SccResult& scc) {
  std::vector<std::uint32_t> size(scc.count, 0);
  std::vector<char> cyclic(scc.count, 0);
  for (std::size_t v = 0; v < succ.size(); ++v) {
    auto c = scc.component[v];
    if (c == kUnset) continue;
    ++size[c];
    for (auto w : succ[v]) {
      if (w == v) cyclic[c] = 1;
    }
  }
  for (std::uint32_t c = 0; c < scc.count; ++c) {
    if (size[c] > 1) cyclic[c] = 1;
  }
  return cyclic;
}

}  // namespace specbench::detail
