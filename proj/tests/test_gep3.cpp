#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "oracle_suite.hpp"
#include "swarmix/gep3.hpp"

using namespace swarmix;
using namespace swarmix::testing;

namespace {

TestItem item(std::uint64_t id, std::uint32_t t, int payload = 0, std::uint32_t src = 0) {
  return {DataId{id}, PeerId{src}, Timestamp{t}, payload};
}

// Utility given directly per id, for the examples quoted with explicit u values.
UtilityFn<TestItem> table(std::map<std::pair<std::uint64_t, std::uint32_t>, double> u) {
  return [u](const TestItem& e) { return u.at({e.id.value, e.timestamp.value}); };
}

std::vector<std::uint64_t> ids(const TestCache& c) {
  std::vector<std::uint64_t> out;
  for (const auto& e : c.entries) out.push_back(e.id.value);
  return out;
}

}  // namespace

TEST_CASE("merge_freshest keeps the newest version of each id") {
  CHECK(merge_freshest(TestCache{{item(1, 3)}}, TestCache{{item(1, 5)}}).entries ==
        std::vector{item(1, 5)});
  CHECK(merge_freshest(TestCache{}, TestCache{{item(7, 0)}}).entries == std::vector{item(7, 0)});
  const TestCache a{{item(1, 4), item(2, 1)}}, b{{item(2, 9), item(3, 2)}};
  CHECK(merge_freshest(a, b).entries == std::vector{item(1, 4), item(2, 9), item(3, 2)});
  CHECK(merge_freshest(a, b).entries == oracle_merge_freshest(a, b));
}

TEST_CASE("merge_freshest tie keeps cache_a's copy") {
  const TestCache a{{item(1, 3, 1)}}, b{{item(1, 3, 2)}};
  CHECK(merge_freshest(a, b).entries.front().payload == 1);
  CHECK(merge_freshest(b, a).entries.front().payload == 2);
}

TEST_CASE("merge_by_utility keeps the most useful version") {
  auto u = table({{{1, 0}, 0.2}, {{1, 1}, 0.8}});
  auto m = merge_by_utility(TestCache{{item(1, 0)}}, TestCache{{item(1, 1)}}, u);
  CHECK(m.entries == std::vector{item(1, 1)});

  const UtilityFn<TestItem> flat = [](const TestItem&) { return 0.5; };
  m = merge_by_utility(TestCache{{item(1, 2)}}, TestCache{{item(1, 6)}}, flat);
  CHECK(m.entries == std::vector{item(1, 6)});

  auto u3 = table({{{1, 0}, .5}, {{2, 0}, .1}, {{1, 1}, .4}, {{3, 1}, .9}});
  m = merge_by_utility(TestCache{{item(1, 0), item(2, 0)}}, TestCache{{item(1, 1), item(3, 1)}}, u3);
  CHECK(m.entries == std::vector{item(1, 0), item(2, 0), item(3, 1)});
}

TEST_CASE("select_top_k") {
  const TestCache c{{item(1, 0, 0, 1), item(2, 0, 0, 2), item(3, 0, 0, 3)}};
  auto u = table({{{1, 0}, 0.9}, {{2, 0}, 0.5}, {{3, 0}, 0.1}});
  CHECK(ids(select_top_k(c, u, 2)) == std::vector<std::uint64_t>{1, 2});
  CHECK(select_top_k(c, u, 20).size() == 3);

  SUBCASE("utility tie goes to the smaller source") {
    const TestCache t{{item(1, 0, 0, 5), item(2, 0, 0, 3), item(3, 0, 0, 9)}};
    auto ut = table({{{1, 0}, 0.7}, {{2, 0}, 0.7}, {{3, 0}, 0.2}});
    auto s = select_top_k(t, ut, 1);
    REQUIRE(s.size() == 1);
    CHECK(s.entries[0].src == PeerId{3});
  }
}

TEST_CASE("adapt_neighbors") {
  const TestCache c{{item(1, 0, 0, 2), item(2, 0, 0, 5), item(3, 0, 0, 8)}};
  auto u = table({{{1, 0}, 0.9}, {{2, 0}, 0.3}, {{3, 0}, 0.6}});
  const std::vector<PeerId> prior{PeerId{1}, PeerId{4}};
  CHECK(adapt_neighbors(c, u, 3, NeighborMode::adaptive, prior, PeerId{99}) ==
        std::vector{PeerId{2}, PeerId{5}, PeerId{8}});
  CHECK(adapt_neighbors(c, u, 3, NeighborMode::fixed, prior, PeerId{99}) == prior);
  CHECK(adapt_neighbors(c, u, 2, NeighborMode::adaptive, prior, PeerId{99}) ==
        std::vector{PeerId{2}, PeerId{8}});
  // the owner never counts as its own neighbour
  CHECK(adapt_neighbors(c, u, 3, NeighborMode::adaptive, prior, PeerId{5}) ==
        std::vector{PeerId{2}, PeerId{8}});
}

TEST_CASE("brute-force oracles, 2000 seeded cases each") {
  CHECK(merge_suite(101, 2000).mismatches == 0);
  CHECK(select_suite(102, 2000).mismatches == 0);
  CHECK(neighbor_suite(103, 2000).mismatches == 0);
}

TEST_CASE("merge and select invariants") {
  Rng rng(7);
  const UtilityFn<TestItem> u = payload_utility;
  for (int i = 0; i < 1000; ++i) {
    const TestCache a = random_cache(rng, 8), b = random_cache(rng, 8);
    for (const auto& m : {merge_freshest(a, b), merge_by_utility(a, b, u)}) {
      std::set<std::uint64_t> seen;
      for (const auto& e : m.entries) REQUIRE(seen.insert(e.id.value).second);
      // every id of the union survives
      for (const auto* c : {&a, &b})
        for (const auto& e : c->entries) REQUIRE(seen.count(e.id.value));
    }

    // commutative wherever the competing versions differ in timestamp
    const auto ab = merge_freshest(a, b), ba = merge_freshest(b, a);
    for (const auto& e : ab.entries) {
      const auto* x = a.find(e.id);
      const auto* y = b.find(e.id);
      if (x && y && x->timestamp == y->timestamp) continue;
      REQUIRE(*ba.find(e.id) == e);
    }

    const std::size_t k = 1 + rng.uniform_index(8);
    const auto merged = merge_by_utility(a, b, u);
    const auto kept = select_top_k(merged, u, k);
    REQUIRE(kept.size() == std::min(k, merged.size()));
    for (const auto& d : merged.entries) {
      if (kept.find(d.id)) continue;
      for (const auto& r : kept.entries) REQUIRE(u(r) >= u(d));
    }
  }
}

TEST_CASE("run_exchange") {
  using P = Gep3Peer<TestItem>;
  const UtilityFn<TestItem> fresh = timestamp_utility<TestItem>();

  SUBCASE("anti-entropy ends with identical caches") {
    Rng rng(11);
    const ExchangePolicy policy{MergeRule::freshest, unbounded, NeighborMode::fixed, unbounded, true};
    for (int i = 0; i < 500; ++i) {
      P v{PeerId{0}, random_cache(rng, 8), {PeerId{1}}};
      P w{PeerId{1}, random_cache(rng, 8), {PeerId{0}}};
      run_exchange(v, w, policy, fresh, fresh);
      // equal as id -> timestamp maps (equal-timestamp copies may differ in payload)
      auto versions = [](const TestCache& c) {
        std::set<std::pair<std::uint64_t, std::uint32_t>> out;
        for (const auto& e : c.entries) out.emplace(e.id.value, e.timestamp.value);
        return out;
      };
      REQUIRE(v.cache.size() == w.cache.size());
      REQUIRE(versions(v.cache) == versions(w.cache));
      REQUIRE(v.neighbors == std::vector{PeerId{1}});
    }
  }

  SUBCASE("identical caches stay unchanged") {
    const TestCache c{{item(2, 3, 0, 2), item(1, 2, 0, 1)}, 20};  // already in selection order
    P v{PeerId{0}, c, {PeerId{1}, PeerId{2}}}, w{PeerId{3}, c, {PeerId{1}, PeerId{2}}};
    const ExchangePolicy policy{MergeRule::freshest, 20, NeighborMode::adaptive, 20, false};
    run_exchange(v, w, policy, fresh, fresh);
    CHECK(v.cache == c);
    CHECK(w.cache == c);
  }

  SUBCASE("errors") {
    P v{PeerId{0}, {}, {}}, w{PeerId{1}, {}, {}};
    const ExchangePolicy policy;
    CHECK_THROWS_AS(run_exchange(v, v, policy, fresh, fresh), std::invalid_argument);
    w.alive = false;
    CHECK_THROWS_AS(run_exchange(v, w, policy, fresh, fresh), ResponderUnreachable);
  }
}
