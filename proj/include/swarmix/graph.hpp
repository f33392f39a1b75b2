#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swarmix/types.hpp"

namespace swarmix {

using Topology = std::vector<std::vector<PeerId>>;  // out-neighbours per peer

// Simple undirected graph in CSR form. Nodes outside `members` carry no edges
// and are ignored by the metrics.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(std::size_t node_count);

  // Symmetrised subgraph induced by nodes with include[v] != 0. Self-loops and
  // edges to excluded nodes are dropped; an empty mask includes every node.
  static UndirectedGraph symmetrize(const Topology& directed, std::span<const std::uint8_t> include);
  static UndirectedGraph from_edges(std::size_t node_count,
                                    std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

  std::size_t node_count() const noexcept { return member_.size(); }
  std::size_t member_count() const noexcept;
  bool is_member(std::uint32_t v) const noexcept { return member_[v] != 0; }
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(std::uint32_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(std::uint32_t a, std::uint32_t b) const noexcept;

  // Members of the largest connected component, ascending. Ties go to the
  // component holding the smallest node id.
  std::vector<std::uint32_t> largest_component() const;

 private:
  void build(std::vector<std::vector<std::uint32_t>> lists);

  std::vector<std::uint8_t> member_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> adjacency_;
};

}  // namespace swarmix
