#include "swarmix/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace swarmix {

UndirectedGraph::UndirectedGraph(std::size_t node_count)
    : member_(node_count, 1), offsets_(node_count + 1, 0) {}

void UndirectedGraph::build(std::vector<std::vector<std::uint32_t>> lists) {
  offsets_.assign(lists.size() + 1, 0);
  adjacency_.clear();
  for (std::size_t v = 0; v < lists.size(); ++v) {
    auto& l = lists[v];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    adjacency_.insert(adjacency_.end(), l.begin(), l.end());
    offsets_[v + 1] = adjacency_.size();
  }
}

UndirectedGraph UndirectedGraph::symmetrize(const Topology& directed,
                                            std::span<const std::uint8_t> include) {
  const std::size_t n = directed.size();
  if (!include.empty() && include.size() != n) throw std::invalid_argument("mask size mismatch");
  UndirectedGraph g;
  g.member_.assign(n, 1);
  if (!include.empty()) std::copy(include.begin(), include.end(), g.member_.begin());
  std::vector<std::vector<std::uint32_t>> lists(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!g.member_[v]) continue;
    for (PeerId w : directed[v]) {
      if (w.value >= n) throw std::out_of_range("neighbour outside topology");
      if (w.value == v || !g.member_[w.value]) continue;
      lists[v].push_back(w.value);
      lists[w.value].push_back(v);
    }
  }
  g.build(std::move(lists));
  return g;
}

UndirectedGraph UndirectedGraph::from_edges(
    std::size_t node_count, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  UndirectedGraph g;
  g.member_.assign(node_count, 1);
  std::vector<std::vector<std::uint32_t>> lists(node_count);
  for (auto [a, b] : edges) {
    if (a >= node_count || b >= node_count) throw std::out_of_range("edge endpoint");
    if (a == b) continue;
    lists[a].push_back(b);
    lists[b].push_back(a);
  }
  g.build(std::move(lists));
  return g;
}

std::size_t UndirectedGraph::member_count() const noexcept {
  return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), std::uint8_t{1}));
}

bool UndirectedGraph::has_edge(std::uint32_t a, std::uint32_t b) const noexcept {
  auto n = neighbors(a);
  return std::binary_search(n.begin(), n.end(), b);
}

std::vector<std::uint32_t> UndirectedGraph::largest_component() const {
  const std::size_t n = node_count();
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  std::vector<std::uint32_t> best, current, stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (!member_[s] || label[s] != UINT32_MAX) continue;
    current.clear();
    stack.assign(1, s);
    label[s] = s;
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      current.push_back(v);
      for (std::uint32_t w : neighbors(v)) {
        if (label[w] == UINT32_MAX) {
          label[w] = s;
          stack.push_back(w);
        }
      }
    }
    if (current.size() > best.size()) best = current;
  }
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace swarmix
