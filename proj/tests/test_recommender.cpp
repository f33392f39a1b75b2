#include "doctest.h"

#include <algorithm>
#include <map>

#include "swarmix/errors.hpp"
#include "swarmix/kernels.hpp"
#include "swarmix/recommender.hpp"
#include "synthetic.hpp"

using namespace swarmix;

namespace {

RatingMatrix matrix(std::vector<std::vector<std::uint32_t>> rated, std::size_t items) {
  std::vector<ProfileSnapshot> rows;
  for (auto& r : rated) {
    std::vector<Rating> ratings;
    for (auto i : r) ratings.push_back({ItemId{i}, 3});
    rows.push_back(std::make_shared<const RatingProfile>(std::move(ratings)));
  }
  return RatingMatrix(std::move(rows), items);
}

// Exhaustive tally: count, for every item, how many neighbours rated it.
RecommendationList oracle_tally(PeerId active, const std::vector<PeerId>& nb, const RatingMatrix& m,
                                std::size_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> scored;  // (votes, item)
  for (std::uint32_t i = 0; i < m.item_count(); ++i) {
    if (m.row(active).contains(ItemId{i})) continue;
    std::uint32_t votes = 0;
    for (PeerId w : nb)
      if (w != active && m.row(w).contains(ItemId{i})) ++votes;
    if (votes > 0) scored.emplace_back(votes, i);
  }
  std::sort(scored.begin(), scored.end(), [](auto a, auto b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  RecommendationList out;
  for (std::size_t j = 0; j < std::min(n, scored.size()); ++j)
    out.push_back({ItemId{scored[j].second}, scored[j].first});
  return out;
}

}  // namespace

TEST_CASE("most_frequent_items examples") {
  // items: x=0, y=1, z=2; users: active=0, A=1, B=2
  const auto m = matrix({{2}, {0, 1}, {1, 2}}, 3);
  CHECK(most_frequent_items(PeerId{0}, {}, m, 2).empty());
  const std::vector<PeerId> nb{PeerId{1}, PeerId{2}};
  CHECK(most_frequent_items(PeerId{0}, nb, m, 2) ==
        RecommendationList{{ItemId{1}, 2}, {ItemId{0}, 1}});
  const auto all = matrix({{0, 1, 2}, {0, 1}, {1, 2}}, 3);
  CHECK(most_frequent_items(PeerId{0}, nb, all, 10).empty());
  CHECK_THROWS_AS(most_frequent_items(PeerId{0}, nb, m, 0), std::invalid_argument);
}

TEST_CASE("vote tally equals exhaustive enumeration") {
  Rng rng(21);
  for (int c = 0; c < 2000; ++c) {
    const std::size_t items = 1 + rng.uniform_index(10);
    const std::size_t users = 2 + rng.uniform_index(6);
    std::vector<std::vector<std::uint32_t>> rated(users);
    for (auto& r : rated)
      while (r.empty() || rng.uniform_real() < 0.5) {
        auto i = static_cast<std::uint32_t>(rng.uniform_index(items));
        if (std::find(r.begin(), r.end(), i) == r.end()) r.push_back(i);
        if (r.size() == items) break;
      }
    const auto m = matrix(rated, items);
    std::vector<PeerId> nb;
    for (std::uint32_t w = 1; w < users; ++w)
      if (rng.uniform_real() < 0.7) nb.push_back(PeerId{w});
    const std::size_t n = 1 + rng.uniform_index(6);
    const auto got = most_frequent_items(PeerId{0}, nb, m, n);
    REQUIRE(got == oracle_tally(PeerId{0}, nb, m, n));
    REQUIRE(got.size() <= n);
  }
}

TEST_CASE("centralized recommender") {
  const auto two = matrix({{0, 1}, {1, 2, 3}}, 4);
  CHECK(centralized_recommend(PeerId{0}, two, 20, 10, 50) ==
        most_frequent_items(PeerId{0}, std::vector{PeerId{1}}, two, 10));

  const auto m = testing::synthetic_ratings({.users = 60, .items = 80, .seed = 8});
  const auto sim = kernels::similarity_matrix(m);
  const auto baseline = centralized_baseline(m, sim, 5, 10, 50);
  for (std::uint32_t v = 0; v < 60; ++v) {
    const auto list = centralized_recommend(PeerId{v}, m, 5, 10, 50);
    REQUIRE(list == centralized_recommend(PeerId{v}, m, 5, 10, 50));
    REQUIRE(list == baseline.recommendations[v]);
    for (const auto& r : list) REQUIRE(!m.row(PeerId{v}).contains(r.item));

    // top similarities are the k largest unweighted cosines, descending
    std::vector<double> all;
    for (std::uint32_t w = 0; w < 60; ++w)
      if (w != v) all.push_back(cosine_similarity(m.row(PeerId{v}), m.row(PeerId{w})));
    std::sort(all.rbegin(), all.rend());
    all.resize(5);
    REQUIRE(baseline.top_similarities[v] == all);
    REQUIRE(baseline.top_m_mean(PeerId{v}, 5) == baseline.mean_similarity(PeerId{v}));
    REQUIRE(baseline.top_m_mean(PeerId{v}, 1) == all[0]);
  }
}

TEST_CASE("overlay recommender") {
  const auto m = testing::synthetic_ratings({.users = 50, .items = 80, .seed = 12});
  const auto sim = kernels::similarity_matrix(m);
  Peer p;
  p.id = PeerId{3};
  p.profile = m.snapshot(p.id);
  CHECK(overlay_recommend(p, m, 10).empty());

  // cache holding the global significance-weighted top-k gives the centralized list
  std::vector<double> score(50);
  for (std::size_t w = 0; w < 50; ++w) score[w] = sim.weighted(3, w, 50);
  for (PeerId w : top_k_peers(p.id, score, 8))
    p.cache.entries.push_back(make_entry(make_self_item(w, m.snapshot(w), Timestamp{0})));
  CHECK(overlay_recommend(p, m, 10) == centralized_recommend(p.id, m, 8, 10, 50));

  p.alive = false;
  CHECK_THROWS_AS(overlay_recommend(p, m, 10), DeadPeer);
}

TEST_CASE("top_k_peers breaks ties on the smaller id") {
  const std::vector<double> score{0.5, 0.9, 0.5, 0.9, 0.1};
  CHECK(top_k_peers(PeerId{1}, score, 3) == std::vector{PeerId{3}, PeerId{0}, PeerId{2}});
}
