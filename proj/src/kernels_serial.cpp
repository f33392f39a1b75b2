#include <cmath>
#include <limits>

#include "kernels_common.hpp"
#include "swarmix/errors.hpp"

namespace swarmix::kernels {

namespace detail {

void check_rows(const RatingMatrix& ratings) {
  for (const auto& row : ratings.rows())
    if (row->empty()) throw EmptyProfile();
}

void similarity_row(const RatingMatrix& ratings, std::size_t v, std::vector<std::uint8_t>& dense,
                    SimilarityMatrix& out) {
  const RatingProfile& pv = *ratings.rows()[v];
  for (const Rating& r : pv.ratings()) dense[r.item.value] = r.value;
  for (std::size_t w = v + 1; w < ratings.user_count(); ++w) {
    const RatingProfile& pw = *ratings.rows()[w];
    std::int64_t dot = 0;
    std::uint32_t co = 0;
    for (const Rating& r : pw.ratings()) {
      const std::uint8_t x = dense[r.item.value];
      dot += std::int64_t{x} * r.value;
      co += x != 0;
    }
    const double cos = cosine_from_parts(dot, pv.norm_squared(), pw.norm_squared());
    out.set(v, w, cos, co);
    out.set(w, v, cos, co);
  }
  for (const Rating& r : pv.ratings()) dense[r.item.value] = 0;
  out.set(v, v, 0.0, 0);
}

std::uint64_t bfs_distance_sum(const UndirectedGraph& g, std::uint32_t source,
                               std::vector<std::int32_t>& dist, std::vector<std::uint32_t>& queue) {
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  std::uint64_t sum = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t v = queue[head];
    sum += static_cast<std::uint64_t>(dist[v]);
    for (std::uint32_t w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  for (std::uint32_t v : queue) dist[v] = -1;
  return sum;
}

double node_clustering(const UndirectedGraph& g, std::uint32_t v,
                       std::vector<std::uint8_t>& mark) {
  const auto nbrs = g.neighbors(v);
  const std::size_t d = nbrs.size();
  if (!g.is_member(v) || d < 2) return std::numeric_limits<double>::quiet_NaN();
  for (std::uint32_t a : nbrs) mark[a] = 1;
  std::uint64_t links = 0;
  for (std::uint32_t a : nbrs)
    for (std::uint32_t b : g.neighbors(a))
      if (b > a && mark[b]) ++links;
  for (std::uint32_t a : nbrs) mark[a] = 0;
  return static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1) / 2.0);
}

PathLengthResult finish_path_length(const UndirectedGraph& g, std::size_t component_size,
                                    std::uint64_t distance_sum) {
  PathLengthResult r;
  r.component_size = component_size;
  const std::size_t members = g.member_count();
  r.coverage = members == 0 ? 0.0 : static_cast<double>(component_size) / static_cast<double>(members);
  if (component_size >= 2) {
    const double pairs =
        static_cast<double>(component_size) * static_cast<double>(component_size - 1);
    r.average = static_cast<double>(distance_sum) / pairs;
  }
  return r;
}

}  // namespace detail

namespace serial {

SimilarityMatrix similarity_matrix(const RatingMatrix& ratings) {
  detail::check_rows(ratings);
  SimilarityMatrix out(ratings.user_count());
  std::vector<std::uint8_t> dense(ratings.item_count(), 0);
  for (std::size_t v = 0; v < ratings.user_count(); ++v) detail::similarity_row(ratings, v, dense, out);
  return out;
}

std::vector<RecommendationList> recommend_batch(const RatingMatrix& ratings,
                                                std::span<const std::vector<PeerId>> neighbors,
                                                std::span<const std::uint8_t> active,
                                                std::size_t n) {
  std::vector<RecommendationList> out(neighbors.size());
  VoteTally tally(ratings.item_count());
  for (std::size_t v = 0; v < neighbors.size(); ++v) {
    if (!active[v]) continue;
    out[v] = tally.top_n(PeerId{static_cast<std::uint32_t>(v)}, neighbors[v], ratings, n);
  }
  return out;
}

PathLengthResult average_path_length(const UndirectedGraph& g) {
  const auto component = g.largest_component();
  std::vector<std::int32_t> dist(g.node_count(), -1);
  std::vector<std::uint32_t> queue;
  std::uint64_t sum = 0;
  for (std::uint32_t s : component) sum += detail::bfs_distance_sum(g, s, dist, queue);
  return detail::finish_path_length(g, component.size(), sum);
}

std::vector<double> local_clustering(const UndirectedGraph& g) {
  std::vector<double> out(g.node_count());
  std::vector<std::uint8_t> mark(g.node_count(), 0);
  for (std::uint32_t v = 0; v < g.node_count(); ++v) out[v] = detail::node_clustering(g, v, mark);
  return out;
}

}  // namespace serial
}  // namespace swarmix::kernels
