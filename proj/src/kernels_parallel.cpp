#include <algorithm>
#include <bit>

#include "kernels_common.hpp"

namespace swarmix::kernels::parallel {

SimilarityMatrix similarity_matrix(const RatingMatrix& ratings) {
  detail::check_rows(ratings);
  const auto users = static_cast<std::int64_t>(ratings.user_count());
  SimilarityMatrix out(ratings.user_count());
#pragma omp parallel
  {
    std::vector<std::uint8_t> dense(ratings.item_count(), 0);
    // Row v writes cells (v, w) and (w, v) for w > v only: no two rows touch
    // the same cell.
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t v = 0; v < users; ++v)
      detail::similarity_row(ratings, static_cast<std::size_t>(v), dense, out);
  }
  return out;
}

std::vector<RecommendationList> recommend_batch(const RatingMatrix& ratings,
                                                std::span<const std::vector<PeerId>> neighbors,
                                                std::span<const std::uint8_t> active,
                                                std::size_t n) {
  std::vector<RecommendationList> out(neighbors.size());
  const auto count = static_cast<std::int64_t>(neighbors.size());
#pragma omp parallel
  {
    VoteTally tally(ratings.item_count());
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t v = 0; v < count; ++v) {
      if (!active[static_cast<std::size_t>(v)]) continue;
      out[static_cast<std::size_t>(v)] =
          tally.top_n(PeerId{static_cast<std::uint32_t>(v)}, neighbors[static_cast<std::size_t>(v)],
                      ratings, n);
    }
  }
  return out;
}

// Bit-parallel BFS: 64 sources per batch, one bit per source. Level by level,
// a node's new bits are the OR of its neighbours' frontier bits minus bits it
// has already seen; each new bit adds the current depth to the distance sum.
PathLengthResult average_path_length(const UndirectedGraph& g) {
  const auto component = g.largest_component();
  const std::size_t n = g.node_count();
  const auto batches = static_cast<std::int64_t>((component.size() + 63) / 64);
  std::uint64_t sum = 0;
#pragma omp parallel reduction(+ : sum)
  {
    std::vector<std::uint64_t> seen(n), frontier(n), next(n);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < batches; ++b) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(frontier.begin(), frontier.end(), 0);
      const std::size_t first = static_cast<std::size_t>(b) * 64;
      const std::size_t last = std::min(first + 64, component.size());
      for (std::size_t i = first; i < last; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << (i - first);
        seen[component[i]] |= bit;
        frontier[component[i]] |= bit;
      }
      bool active = true;
      for (std::uint64_t depth = 1; active; ++depth) {
        active = false;
        for (std::uint32_t v : component) {
          std::uint64_t reach = 0;
          for (std::uint32_t w : g.neighbors(v)) reach |= frontier[w];
          reach &= ~seen[v];
          next[v] = reach;
          if (reach) {
            seen[v] |= reach;
            sum += depth * static_cast<std::uint64_t>(std::popcount(reach));
            active = true;
          }
        }
        std::swap(frontier, next);
      }
    }
  }
  return detail::finish_path_length(g, component.size(), sum);
}

std::vector<double> local_clustering(const UndirectedGraph& g) {
  std::vector<double> out(g.node_count());
  const auto n = static_cast<std::int64_t>(g.node_count());
#pragma omp parallel
  {
    std::vector<std::uint8_t> mark(g.node_count(), 0);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t v = 0; v < n; ++v)
      out[static_cast<std::size_t>(v)] =
          detail::node_clustering(g, static_cast<std::uint32_t>(v), mark);
  }
  return out;
}

}  // namespace swarmix::kernels::parallel
