#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "swarmix/errors.hpp"
#include "swarmix/swarmix.hpp"
#include "synthetic.hpp"

using namespace swarmix;

namespace {

Peer make_peer(std::uint32_t id, const RatingMatrix& m, std::vector<std::uint32_t> known,
               std::size_t k) {
  Peer p;
  p.id = PeerId{id};
  p.profile = m.snapshot(p.id);
  p.cache.capacity = k;
  for (auto w : known) {
    p.cache.entries.push_back(make_entry(make_self_item(PeerId{w}, m.snapshot(PeerId{w}), Timestamp{0})));
    p.neighbors.push_back(PeerId{w});
  }
  return p;
}

}  // namespace

TEST_CASE("self item") {
  auto live = RatingProfile({{ItemId{1}, 4}, {ItemId{3}, 2}});
  const auto a = make_self_item(PeerId{3}, live, Timestamp{7});
  CHECK(a.peer_id == PeerId{3});
  CHECK(item_id(make_entry(a)) == DataId{3});
  CHECK(item_source(make_entry(a)) == PeerId{3});
  CHECK(a.timestamp == Timestamp{7});
  CHECK(*a.profile == live);

  const auto b = make_self_item(PeerId{3}, live, Timestamp{8});
  CHECK(b.timestamp == Timestamp{8});
  CHECK(*b.profile == *a.profile);

  live = RatingProfile({{ItemId{2}, 5}});
  CHECK(*a.profile != live);
  CHECK(a.profile->size() == 2);

  CHECK_THROWS_AS(make_self_item(PeerId{1}, RatingProfile{}, Timestamp{0}), EmptyProfile);
}

TEST_CASE("swarmix exchange laws") {
  const auto m = testing::synthetic_ratings({.users = 40, .items = 60, .groups = 4, .seed = 5});
  const ProtocolConfig config{Protocol::swarmix, 5};
  Rng rng(9);
  for (int round = 0; round < 300; ++round) {
    std::vector<Peer> peers;
    for (std::uint32_t v = 0; v < 40; ++v) {
      std::set<std::uint32_t> known;
      while (known.size() < 1 + rng.uniform_index(8)) {
        auto w = static_cast<std::uint32_t>(rng.uniform_index(40));
        if (w != v) known.insert(w);
      }
      peers.push_back(make_peer(v, m, {known.begin(), known.end()}, config.cache_size));
    }
    const auto a = static_cast<std::uint32_t>(rng.uniform_index(40));
    const auto b = static_cast<std::uint32_t>((a + 1 + rng.uniform_index(39)) % 40);
    const Peer responder_before = peers[b];
    swarmix_exchange(peers[a], peers[b], config, Timestamp{static_cast<std::uint32_t>(round + 1)});

    for (const Peer* p : {&peers[a], &peers[b]}) {
      REQUIRE(p->cache.size() <= config.cache_size);
      std::set<PeerId> sources;
      for (const auto& e : p->cache.entries) REQUIRE(sources.insert(item_source(e)).second);
      REQUIRE(!sources.count(p->id));
      REQUIRE(p->neighbors == std::vector<PeerId>(sources.begin(), sources.end()));
      REQUIRE(p->neighbors == cache_sources(*p));
    }
    // The initiator's fresh item reached the responder's candidate set: it is
    // kept unless k strictly-better-or-tied items crowd it out.
    const auto u = make_utility(config, *peers[b].profile);
    const auto pushed = make_entry(make_self_item(PeerId{a}, m.snapshot(PeerId{a}), Timestamp{0}));
    if (!peers[b].cache.find(DataId{a})) {
      REQUIRE(peers[b].cache.size() == config.cache_size);
      for (const auto& e : peers[b].cache.entries) REQUIRE(u(e) >= u(pushed));
    }
  }
}

TEST_CASE("asymmetry witness with k = 2") {
  const auto m = testing::synthetic_ratings({.users = 12, .items = 30, .groups = 3, .seed = 2});
  const ProtocolConfig config{Protocol::swarmix, 2};
  bool found = false;
  for (std::uint32_t seed = 0; seed < 200 && !found; ++seed) {
    Rng rng(seed);
    std::vector<std::uint32_t> ids(12);
    std::iota(ids.begin(), ids.end(), 0u);
    rng.shuffle(std::span<std::uint32_t>(ids));
    Peer v = make_peer(ids[0], m, {ids[2], ids[3]}, 2);
    Peer w = make_peer(ids[1], m, {ids[4], ids[5]}, 2);
    swarmix_exchange(v, w, config, Timestamp{1});
    if (*v.profile != *w.profile && cache_sources(v) != cache_sources(w)) found = true;
  }
  CHECK(found);
}

TEST_CASE("join") {
  const auto m = testing::synthetic_ratings({.users = 10, .items = 30, .groups = 2, .seed = 4});
  const ProtocolConfig config;
  Peer buddy = make_peer(2, m, {3, 4}, 20);
  const Peer p = make_joining_peer(PeerId{10}, m.snapshot(PeerId{0}), buddy, Timestamp{5}, config);
  REQUIRE(p.cache.size() == 1);
  CHECK(item_source(p.cache.entries[0]) == PeerId{2});
  CHECK(p.neighbors == std::vector{PeerId{2}});
  CHECK(p.active_from == 6);
  buddy.alive = false;
  CHECK_THROWS_AS(make_joining_peer(PeerId{10}, m.snapshot(PeerId{0}), buddy, Timestamp{5}, config),
                  BuddyUnreachable);
}

TEST_CASE("protocol variants") {
  CHECK(exchange_policy({Protocol::swarmix}).merge == MergeRule::utility);
  const auto news = exchange_policy({Protocol::newscast, 7});
  CHECK(news.merge == MergeRule::freshest);
  CHECK(news.capacity == 7);
  CHECK(news.neighbors == NeighborMode::adaptive);
  const auto ae = exchange_policy({Protocol::anti_entropy});
  CHECK(ae.capacity == unbounded);
  CHECK(ae.neighbors == NeighborMode::fixed);
  CHECK(ae.keep_own_item);
}
