#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "swarmix/errors.hpp"
#include "swarmix/metrics.hpp"
#include "swarmix/sim.hpp"
#include "synthetic.hpp"

using namespace swarmix;
using namespace swarmix::testing;

namespace {

const RatingMatrix& population() {
  static const RatingMatrix m =
      synthetic_ratings({.users = 943, .items = 300, .groups = 12, .min_ratings = 5, .max_ratings = 30, .seed = 17});
  return m;
}

const RatingMatrix& small() {
  static const RatingMatrix m = synthetic_ratings({.users = 120, .items = 200, .seed = 23});
  return m;
}

bool same(const CycleSnapshot& a, const CycleSnapshot& b) {
  auto nan_eq = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] == y[i] || (std::isnan(x[i]) && std::isnan(y[i])))) return false;
    return true;
  };
  return a.cycle == b.cycle && *a.topology == *b.topology &&
         nan_eq(a.neighbor_similarity, b.neighbor_similarity) &&
         a.recommendations == b.recommendations && a.alive == b.alive && a.left == b.left &&
         a.incoming_contacts == b.incoming_contacts && a.exchanges == b.exchanges &&
         a.skipped_turns == b.skipped_turns;
}

std::vector<std::uint32_t> dead(const SimState& s) {
  std::vector<std::uint32_t> out;
  for (const auto& p : s.peers)
    if (!p.alive) out.push_back(p.id.value);
  return out;
}

}  // namespace

TEST_CASE("bootstrap topology") {
  Rng rng(1);
  const auto two = bootstrap_topology(2, 1.0, 20, rng);
  CHECK(two == Topology{{PeerId{1}}, {PeerId{0}}});

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng a(seed), b(seed);
    const auto t = bootstrap_topology(943, 2.494, 20, a);
    CHECK(t == bootstrap_topology(943, 2.494, 20, b));
    std::size_t edges = 0;
    for (std::uint32_t v = 0; v < 943; ++v) {
      edges += t[v].size();
      REQUIRE(t[v].size() <= 19);
      REQUIRE(std::find(t[v].begin(), t[v].end(), PeerId{v}) == t[v].end());
    }
    const double mean = static_cast<double>(edges) / 943.0;
    CHECK(mean >= 2.444);
    CHECK(mean <= 2.544);
    const auto g = UndirectedGraph::symmetrize(t, {});
    CHECK(g.largest_component().size() == 943);
  }
  CHECK_THROWS_AS(bootstrap_topology(1, 2.0, 20, rng), InvalidConfig);
  CHECK_THROWS_AS(bootstrap_topology(10, 20.0, 20, rng), InvalidConfig);
}

TEST_CASE("simulation is deterministic and schema-stable") {
  SimConfig c;
  c.cycles = 6;
  c.seed = 99;
  const auto a = run_simulation(c, small());
  const auto b = run_simulation(c, small());
  REQUIRE(a.size() == 7);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same(a[i], b[i]));

  c.cycles = 1;
  CHECK(run_simulation(c, small()).size() == 2);
  c.cycles = 0;
  CHECK_THROWS_AS(run_simulation(c, small()), InvalidConfig);

  c.cycles = 3;
  c.protocol.protocol = Protocol::newscast;
  const auto n = run_simulation(c, small());
  CHECK(n.size() == 4);
  CHECK(n.back().peer_count() == a.back().peer_count());
}

TEST_CASE("per-cycle conservation and protocol laws") {
  for (Protocol proto : {Protocol::swarmix, Protocol::newscast}) {
    SimConfig c;
    c.protocol.protocol = proto;
    c.protocol.cache_size = 8;
    c.cycles = 20;
    c.churn = {ChurnMode::failures, 30, 10};
    SimState st = bootstrap(small(), c);
    std::vector<Cache<CacheEntry>> frozen(st.peers.size());
    for (std::uint32_t cyc = 1; cyc <= c.cycles; ++cyc) {
      const auto s = run_cycle(st);
      std::uint32_t usable = 0, received = 0;
      for (std::size_t v = 0; v < st.peers.size(); ++v) {
        const Peer& p = st.peers[v];
        received += s.incoming_contacts[v];
        if (p.alive) ++usable;
        if (!p.alive) {
          REQUIRE(s.incoming_contacts[v] == 0);
          REQUIRE(s.recommendations[v].empty());
          if (cyc > c.churn.at_cycle) REQUIRE(p.cache == frozen[v]);
          frozen[v] = p.cache;
          continue;
        }
        REQUIRE(p.cache.size() <= c.protocol.cache_size);
        std::set<DataId> ids;
        for (const auto& e : p.cache.entries) REQUIRE(ids.insert(item_id(e)).second);
        REQUIRE(!ids.count(DataId{p.id.value}));
        REQUIRE(std::find(p.neighbors.begin(), p.neighbors.end(), p.id) == p.neighbors.end());
        REQUIRE(p.neighbors == cache_sources(p));
        for (const auto& r : s.recommendations[v]) REQUIRE(!p.profile->contains(r.item));
      }
      REQUIRE(s.exchanges == received);
      REQUIRE(s.exchanges + s.skipped_turns == usable);
      if (cyc >= c.churn.at_cycle) REQUIRE(usable == 120 - 36);
    }
  }
}

TEST_CASE("cache fill is monotone from bootstrap") {
  SimConfig c;
  c.cycles = 15;
  SimState st = bootstrap(small(), c);
  std::vector<std::size_t> size(st.peers.size());
  for (std::size_t v = 0; v < size.size(); ++v) size[v] = st.peers[v].cache.size();
  for (std::uint32_t cyc = 0; cyc < c.cycles; ++cyc) {
    run_cycle(st);
    for (std::size_t v = 0; v < size.size(); ++v) {
      const std::size_t now = st.peers[v].cache.size();
      if (size[v] < c.protocol.cache_size) REQUIRE(now >= size[v]);
      size[v] = now;
    }
  }
  for (auto s : size) CHECK(s == c.protocol.cache_size);
}

TEST_CASE("churn injection") {
  SimConfig c;
  c.cycles = 2;
  const auto sim = std::make_shared<const kernels::SimilarityMatrix>(kernels::similarity_matrix(population()));

  SimState base = bootstrap(population(), c, sim);
  SimState a = base, b = base, z = base;
  inject_churn(a, {ChurnMode::failures, 20, 1});
  inject_churn(b, {ChurnMode::leavings, 20, 1});
  CHECK(dead(a).size() == 188);
  CHECK(dead(a) == dead(b));
  for (auto v : dead(a)) {
    CHECK(!a.peers[v].left);
    CHECK(b.peers[v].left);
  }

  inject_churn(z, {ChurnMode::failures, 0, 1});
  CHECK(dead(z).empty());
  CHECK(run_cycle(z).recommendations == run_cycle(base).recommendations);

  // nested kill sets for the same RNG state
  SimState ten = bootstrap(population(), c, sim), forty = ten;
  inject_churn(ten, {ChurnMode::failures, 10, 1});
  inject_churn(forty, {ChurnMode::failures, 40, 1});
  const auto d10 = dead(ten), d40 = dead(forty);
  CHECK(d10.size() == 94);
  CHECK(d40.size() == 377);
  CHECK(std::includes(d40.begin(), d40.end(), d10.begin(), d10.end()));

  CHECK_THROWS_AS(inject_churn(a, {ChurnMode::failures, 120, 1}), InvalidConfig);
}

TEST_CASE("join") {
  SimConfig c;
  c.protocol.cache_size = 10;
  c.cycles = 30;
  SimState st = bootstrap(small(), c);
  for (int i = 0; i < 3; ++i) run_cycle(st);
  RatingProfile fresh(std::vector<Rating>(small().row(PeerId{5}).ratings().begin(),
                                          small().row(PeerId{5}).ratings().end()));
  join(st, PeerId{120}, PeerId{7}, fresh);
  REQUIRE(st.peers.size() == 121);
  const Peer& p = st.peers[120];
  CHECK(p.cache.size() == 1);
  CHECK(p.neighbors == std::vector{PeerId{7}});

  std::size_t last = 1;
  bool full = false;
  for (int i = 0; i < 25 && !full; ++i) {
    const auto s = run_cycle(st);
    CHECK(s.peer_count() == 121);
    const std::size_t now = st.peers[120].cache.size();
    REQUIRE(now >= last);
    last = now;
    full = now == c.protocol.cache_size;
  }
  CHECK(full);

  st.peers[9].alive = false;
  CHECK_THROWS_AS(join(st, PeerId{121}, PeerId{9}, fresh), BuddyUnreachable);
  CHECK_THROWS_AS(join(st, PeerId{121}, PeerId{500}, fresh), BuddyUnreachable);
}

TEST_CASE("early in-degree distribution under uniform neighbour choice") {
  // Newscast caches carry no similarity bias, so incoming contacts per cycle
  // stay close to Poisson(1) on a large population.
  SimConfig c;
  c.protocol.protocol = Protocol::newscast;
  c.cycles = 3;
  const auto snaps = run_simulation(c, population());
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const auto st = in_degree_stats(std::span<const CycleSnapshot>(&snaps[i], 1));
    CHECK(snaps[i].skipped_turns == 0);
    CHECK(st.mean == 1.0);
    CHECK(st.variance >= 0.7);
    CHECK(st.variance <= 1.3);
  }
}
