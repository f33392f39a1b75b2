#pragma once

// Evaluation metrics over cycle snapshots. Graph metrics use the symmetrised
// subgraph induced by live peers.

#include <array>
#include <memory>
#include <span>
#include <utility>

#include "swarmix/graph.hpp"
#include "swarmix/kernels.hpp"
#include "swarmix/snapshot.hpp"
#include "swarmix/stats.hpp"

namespace swarmix {

struct CycleMetrics {
  double avg_similarity = 0.0;
  double similarity_variance = 0.0;
  double hit_rate = 0.0;
  double hit_rate_voluntary = 0.0;
  double avg_path_length = 0.0;
  double path_coverage = 0.0;
  double clustering_coefficient = 0.0;
  double in_degree_mean = 0.0;
  double in_degree_variance = 0.0;

  bool operator==(const CycleMetrics&) const = default;
};

// Column name and member for every metric, in CSV order.
inline constexpr std::array<std::pair<const char*, double CycleMetrics::*>, 9> metric_fields{{
    {"avg_similarity", &CycleMetrics::avg_similarity},
    {"similarity_variance", &CycleMetrics::similarity_variance},
    {"hit_rate", &CycleMetrics::hit_rate},
    {"hit_rate_voluntary", &CycleMetrics::hit_rate_voluntary},
    {"avg_path_length", &CycleMetrics::avg_path_length},
    {"path_coverage", &CycleMetrics::path_coverage},
    {"clustering_coefficient", &CycleMetrics::clustering_coefficient},
    {"in_degree_mean", &CycleMetrics::in_degree_mean},
    {"in_degree_variance", &CycleMetrics::in_degree_variance},
}};

// Mean and population variance of per-peer neighbourhood similarity over live
// peers with a non-empty neighbourhood. Throws NoEligiblePeers.
MeanVariance similarity_stats(const CycleSnapshot& s);

enum class HitRateMode { failures, voluntary };

// hidden[v] is peer v's hidden item; hidden.size() is the original population.
// failures:  sum of hits over V / |V|, dead peers scoring 0.
// voluntary: sum of hits over V \ L / |V \ L|.
double hit_rate(const CycleSnapshot& s, std::span<const ItemId> hidden, HitRateMode mode);

UndirectedGraph live_graph(const CycleSnapshot& s);

kernels::PathLengthResult avg_path_length(const CycleSnapshot& s);

// Mean Watts-Strogatz coefficient over members of degree >= 2. Throws
// NoEligiblePeers when there are none.
double clustering_coefficient(const UndirectedGraph& g);
double clustering_coefficient(const CycleSnapshot& s);

// Mean and population variance of per-cycle incoming session counts, pooled
// over live peers and every snapshot in the window.
MeanVariance in_degree_stats(std::span<const CycleSnapshot> window);

// Computes every metric for a snapshot. Graph metrics are reused while the
// topology and live set are unchanged. Undefined similarity and clustering
// values (no eligible peers) are reported as 0.
class MetricsCalculator {
 public:
  CycleMetrics operator()(const CycleSnapshot& s, std::span<const ItemId> hidden);

 private:
  std::shared_ptr<const Topology> topology_;
  std::vector<std::uint8_t> alive_;
  kernels::PathLengthResult path_;
  double clustering_ = 0.0;
};

}  // namespace swarmix
