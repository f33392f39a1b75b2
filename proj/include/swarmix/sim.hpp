#pragma once

// Cycle-driven, seeded simulation of a GEP3 overlay: bootstrap, one session
// per live peer per cycle in shuffled order, churn injection, snapshots.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "swarmix/graph.hpp"
#include "swarmix/kernels.hpp"
#include "swarmix/random.hpp"
#include "swarmix/rating_matrix.hpp"
#include "swarmix/snapshot.hpp"
#include "swarmix/swarmix.hpp"

namespace swarmix {

enum class ChurnMode { none, failures, leavings };

struct ChurnSpec {
  ChurnMode mode = ChurnMode::none;
  double pct = 0.0;  // share of the bootstrap population, 0..100
  std::uint32_t at_cycle = 50;

  bool operator==(const ChurnSpec&) const = default;
};

struct SimConfig {
  ProtocolConfig protocol;  // variant, cache size k, utility, significance threshold
  std::uint32_t cycles = 100;
  std::uint64_t seed = 1;
  ChurnSpec churn;
  std::size_t top_n = 10;
  double bootstrap_degree = 2.494;

  // Throws InvalidConfig naming the offending key.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

struct SimState {
  SimConfig config;
  RatingMatrix profiles;  // training ratings, row = peer
  std::vector<Peer> peers;
  std::shared_ptr<const kernels::SimilarityMatrix> similarity;
  std::uint32_t cycle = 0;
  std::size_t bootstrap_peers = 0;
  Rng rng;
  std::shared_ptr<const Topology> last_topology;
};

// Uniform random spanning tree (both directions) plus random directed edges
// until the mean out-degree reaches `target_degree`; out-degrees stay below k.
// Weakly connected and deliberately unbalanced. Throws InvalidConfig.
Topology bootstrap_topology(std::size_t n, double target_degree, std::size_t k, Rng& rng);

// Caches are seeded with timestamp-0 entries of the bootstrap out-neighbours.
// `similarity` is computed from `training` when not supplied.
SimState bootstrap(const RatingMatrix& training, const SimConfig& config,
                   std::shared_ptr<const kernels::SimilarityMatrix> similarity = nullptr);

CycleSnapshot snapshot(SimState& state);

// Advances one cycle. Every live peer initiates one session with a uniformly
// drawn live neighbour (skipping its turn if none is reachable); its top-N
// list is computed right after.
CycleSnapshot run_cycle(SimState& state);

// Marks floor(pct/100 * n) random live peers dead (and left, for leavings).
// Peers are taken from a full shuffle of the live set, so kill sets are
// nested across percentages for the same RNG state. pct == 0 is a no-op.
void inject_churn(SimState& state, const ChurnSpec& spec);

// Adds a peer that knows only `buddy`; it initiates from the next cycle.
// `new_peer` must be the next unused id. Throws BuddyUnreachable.
void join(SimState& state, PeerId new_peer, PeerId buddy, RatingProfile profile);

// Called with the full state after bootstrap and after every cycle; lets
// tests assert on caches that snapshots do not carry.
using CycleHook = std::function<void(const SimState&, const CycleSnapshot&)>;

// Bootstrap snapshot followed by one snapshot per cycle.
std::vector<CycleSnapshot> run_simulation(const SimConfig& config, const RatingMatrix& training,
                                          std::shared_ptr<const kernels::SimilarityMatrix> similarity = nullptr,
                                          const CycleHook& hook = {});

}  // namespace swarmix
