#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "swarmix/graph.hpp"
#include "swarmix/recommender.hpp"

namespace swarmix {

// State of the overlay at the end of one cycle (cycle 0 = bootstrap).
struct CycleSnapshot {
  std::uint32_t cycle = 0;
  // Shared between consecutive snapshots while unchanged.
  std::shared_ptr<const Topology> topology;
  // Per peer: mean unweighted cosine to its neighbours at cycle end; NaN for
  // dead peers and empty neighbourhoods.
  std::vector<double> neighbor_similarity;
  // Per peer: top-N list computed right after the peer's own session.
  std::vector<RecommendationList> recommendations;
  std::vector<std::uint8_t> alive;
  std::vector<std::uint8_t> left;
  // Sessions each peer answered during this cycle.
  std::vector<std::uint32_t> incoming_contacts;
  std::uint32_t exchanges = 0;
  std::uint32_t skipped_turns = 0;

  std::size_t peer_count() const noexcept { return alive.size(); }
};

}  // namespace swarmix
