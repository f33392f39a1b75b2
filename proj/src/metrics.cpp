#include "swarmix/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "swarmix/errors.hpp"

namespace swarmix {

MeanVariance similarity_stats(const CycleSnapshot& s) {
  std::vector<double> per_peer;
  for (std::size_t v = 0; v < s.peer_count(); ++v) {
    if (!s.alive[v] || std::isnan(s.neighbor_similarity[v])) continue;
    per_peer.push_back(s.neighbor_similarity[v]);
  }
  if (per_peer.empty()) throw NoEligiblePeers("no live peer has a neighbour");
  return mean_and_variance(per_peer);
}

double hit_rate(const CycleSnapshot& s, std::span<const ItemId> hidden, HitRateMode mode) {
  if (hidden.size() > s.peer_count()) throw std::invalid_argument("more hidden items than peers");
  std::size_t hits = 0, denominator = 0;
  for (std::size_t v = 0; v < hidden.size(); ++v) {
    if (mode == HitRateMode::voluntary && s.left[v]) continue;
    ++denominator;
    if (s.alive[v] && contains(s.recommendations[v], hidden[v])) ++hits;
  }
  return denominator == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(denominator);
}

UndirectedGraph live_graph(const CycleSnapshot& s) {
  return UndirectedGraph::symmetrize(*s.topology, s.alive);
}

kernels::PathLengthResult avg_path_length(const CycleSnapshot& s) {
  return kernels::average_path_length(live_graph(s));
}

double clustering_coefficient(const UndirectedGraph& g) {
  auto local = kernels::local_clustering(g);
  double sum = 0.0;
  std::size_t count = 0;
  for (double c : local) {
    if (std::isnan(c)) continue;
    sum += c;
    ++count;
  }
  if (count == 0) throw NoEligiblePeers("no live peer has two or more neighbours");
  return sum / static_cast<double>(count);
}

double clustering_coefficient(const CycleSnapshot& s) { return clustering_coefficient(live_graph(s)); }

MeanVariance in_degree_stats(std::span<const CycleSnapshot> window) {
  std::vector<double> counts;
  for (const CycleSnapshot& s : window)
    for (std::size_t v = 0; v < s.peer_count(); ++v)
      if (s.alive[v]) counts.push_back(static_cast<double>(s.incoming_contacts[v]));
  return mean_and_variance(counts);
}

CycleMetrics MetricsCalculator::operator()(const CycleSnapshot& s, std::span<const ItemId> hidden) {
  CycleMetrics m;
  try {
    auto sim = similarity_stats(s);
    m.avg_similarity = sim.mean;
    m.similarity_variance = sim.variance;
  } catch (const NoEligiblePeers&) {
  }
  m.hit_rate = hit_rate(s, hidden, HitRateMode::failures);
  m.hit_rate_voluntary = hit_rate(s, hidden, HitRateMode::voluntary);

  if (topology_ != s.topology || alive_ != s.alive) {
    UndirectedGraph g = live_graph(s);
    path_ = kernels::average_path_length(g);
    try {
      clustering_ = clustering_coefficient(g);
    } catch (const NoEligiblePeers&) {
      clustering_ = 0.0;
    }
    topology_ = s.topology;
    alive_ = s.alive;
  }
  m.avg_path_length = path_.average;
  m.path_coverage = path_.coverage;
  m.clustering_coefficient = clustering_;

  auto deg = in_degree_stats(std::span<const CycleSnapshot>(&s, 1));
  m.in_degree_mean = deg.mean;
  m.in_degree_variance = deg.variance;
  return m;
}

}  // namespace swarmix
