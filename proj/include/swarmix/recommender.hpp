#pragma once

// User-based collaborative filtering with most-frequent-items aggregation:
// each neighbour votes once for every item in its training profile, items the
// active user already rated are removed, and the N most-voted items win.

#include <cstdint>
#include <span>
#include <vector>

#include "swarmix/rating_matrix.hpp"
#include "swarmix/swarmix.hpp"
#include "swarmix/types.hpp"

namespace swarmix {

namespace kernels {
class SimilarityMatrix;
}

struct Recommendation {
  ItemId item;
  std::uint32_t votes = 0;

  bool operator==(const Recommendation&) const = default;
};

// Ordered by (votes desc, item asc); at most N entries.
using RecommendationList = std::vector<Recommendation>;

bool contains(const RecommendationList& list, ItemId item) noexcept;

// Reusable vote counter sized to the item catalogue.
class VoteTally {
 public:
  explicit VoteTally(std::size_t item_count) : votes_(item_count, 0), consumed_(item_count, 0) {}

  RecommendationList top_n(PeerId active, std::span<const PeerId> neighbors,
                           const RatingMatrix& ratings, std::size_t n);

 private:
  std::vector<std::uint32_t> votes_;
  std::vector<std::uint8_t> consumed_;
  std::vector<std::uint32_t> touched_;
};

// Empty neighbourhood gives an empty list. `active` is ignored if present in
// `neighbors`. Throws std::invalid_argument for n == 0.
RecommendationList most_frequent_items(PeerId active, std::span<const PeerId> neighbors,
                                       const RatingMatrix& ratings, std::size_t n);

// The k best-scoring peers other than `active`; score ties go to the smaller
// id. `score[p]` is the score of peer p.
std::vector<PeerId> top_k_peers(PeerId active, std::span<const double> score, std::size_t k);

// Reference recommender with global knowledge: significance-weighted cosine
// against every other user, top-k as neighbourhood, then majority vote.
RecommendationList centralized_recommend(PeerId active, const RatingMatrix& ratings,
                                         std::size_t k, std::size_t n, unsigned threshold);

// Recommendation from local cache knowledge only. Throws DeadPeer.
RecommendationList overlay_recommend(const Peer& active, const RatingMatrix& ratings,
                                     std::size_t n);

// Centralized upper bound for a whole population.
struct CentralizedBaseline {
  // Per peer: unweighted cosines of its k most similar peers, descending.
  std::vector<std::vector<double>> top_similarities;
  // Per peer: recommendations from the significance-weighted top-k.
  std::vector<RecommendationList> recommendations;

  double mean_similarity(PeerId peer) const;
  // Mean of the m largest similarities (m <= k); the per-peer bound any
  // neighbourhood of size m can reach.
  double top_m_mean(PeerId peer, std::size_t m) const;
};

CentralizedBaseline centralized_baseline(const RatingMatrix& ratings,
                                         const kernels::SimilarityMatrix& similarity,
                                         std::size_t k, std::size_t n, unsigned threshold);

}  // namespace swarmix
