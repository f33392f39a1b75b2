#include "swarmix/recommender.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "swarmix/errors.hpp"
#include "swarmix/kernels.hpp"
#include "swarmix/profile.hpp"
#include "swarmix/stats.hpp"

namespace swarmix {

bool contains(const RecommendationList& list, ItemId item) noexcept {
  return std::any_of(list.begin(), list.end(),
                     [&](const Recommendation& r) { return r.item == item; });
}

RecommendationList VoteTally::top_n(PeerId active, std::span<const PeerId> neighbors,
                                    const RatingMatrix& ratings, std::size_t n) {
  if (n == 0) throw std::invalid_argument("top-N needs N >= 1");
  touched_.clear();
  for (PeerId w : neighbors) {
    if (w == active) continue;
    for (const Rating& r : ratings.row(w).ratings()) {
      if (votes_[r.item.value]++ == 0) touched_.push_back(r.item.value);
    }
  }

  const RatingProfile& own = ratings.row(active);
  for (const Rating& r : own.ratings()) consumed_[r.item.value] = 1;
  RecommendationList candidates;
  candidates.reserve(touched_.size());
  for (std::uint32_t item : touched_) {
    if (!consumed_[item]) candidates.push_back({ItemId{item}, votes_[item]});
    votes_[item] = 0;
  }
  for (const Rating& r : own.ratings()) consumed_[r.item.value] = 0;
  auto order = [](const Recommendation& a, const Recommendation& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    return a.item < b.item;
  };
  const std::size_t keep = std::min(n, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), order);
  candidates.resize(keep);
  return candidates;
}

RecommendationList most_frequent_items(PeerId active, std::span<const PeerId> neighbors,
                                       const RatingMatrix& ratings, std::size_t n) {
  VoteTally tally(ratings.item_count());
  return tally.top_n(active, neighbors, ratings, n);
}

std::vector<PeerId> top_k_peers(PeerId active, std::span<const double> score, std::size_t k) {
  std::vector<PeerId> peers;
  peers.reserve(score.size());
  for (std::uint32_t p = 0; p < score.size(); ++p)
    if (p != active.value) peers.push_back(PeerId{p});
  auto better = [&](PeerId a, PeerId b) {
    if (score[a.value] != score[b.value]) return score[a.value] > score[b.value];
    return a < b;
  };
  const std::size_t keep = std::min(k, peers.size());
  std::partial_sort(peers.begin(), peers.begin() + static_cast<std::ptrdiff_t>(keep), peers.end(),
                    better);
  peers.resize(keep);
  return peers;
}

RecommendationList centralized_recommend(PeerId active, const RatingMatrix& ratings,
                                         std::size_t k, std::size_t n, unsigned threshold) {
  if (k == 0) throw std::invalid_argument("neighbourhood size must be >= 1");
  std::vector<double> score(ratings.user_count(), 0.0);
  for (std::uint32_t p = 0; p < score.size(); ++p) {
    if (p == active.value) continue;
    score[p] = significance_weighted_similarity(ratings.row(active), ratings.row(PeerId{p}),
                                                threshold);
  }
  auto neighbors = top_k_peers(active, score, k);
  return most_frequent_items(active, neighbors, ratings, n);
}

RecommendationList overlay_recommend(const Peer& active, const RatingMatrix& ratings,
                                     std::size_t n) {
  if (!active.alive) throw DeadPeer("peer " + std::to_string(active.id.value) + " has failed");
  auto neighbors = cache_sources(active);
  return most_frequent_items(active.id, neighbors, ratings, n);
}

double CentralizedBaseline::mean_similarity(PeerId peer) const {
  return descending_mean(top_similarities.at(peer.value));
}

double CentralizedBaseline::top_m_mean(PeerId peer, std::size_t m) const {
  const auto& top = top_similarities.at(peer.value);
  if (m > top.size()) throw std::out_of_range("m exceeds baseline neighbourhood");
  return descending_mean(std::span<const double>(top.data(), m));
}

CentralizedBaseline centralized_baseline(const RatingMatrix& ratings,
                                         const kernels::SimilarityMatrix& similarity,
                                         std::size_t k, std::size_t n, unsigned threshold) {
  const std::size_t users = ratings.user_count();
  if (similarity.size() != users) throw std::invalid_argument("similarity matrix size mismatch");
  CentralizedBaseline out;
  out.top_similarities.resize(users);
  std::vector<std::vector<PeerId>> weighted_neighbors(users);

#pragma omp parallel
  {
    std::vector<double> cosine(users), weighted(users);
#pragma omp for schedule(dynamic, 16)
    for (std::size_t v = 0; v < users; ++v) {
      const PeerId active{static_cast<std::uint32_t>(v)};
      for (std::uint32_t w = 0; w < users; ++w) {
        cosine[w] = similarity.cosine(v, w);
        weighted[w] = similarity.weighted(v, w, threshold);
      }
      auto top = top_k_peers(active, cosine, k);
      auto& sims = out.top_similarities[v];
      sims.reserve(top.size());
      for (PeerId p : top) sims.push_back(cosine[p.value]);
      weighted_neighbors[v] = top_k_peers(active, weighted, k);
    }
  }
  std::vector<std::uint8_t> all(users, 1);
  out.recommendations = kernels::recommend_batch(ratings, weighted_neighbors, all, n);
  return out;
}

}  // namespace swarmix
