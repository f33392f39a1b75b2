#include "swarmix/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "swarmix/errors.hpp"
#include "swarmix/stats.hpp"

namespace swarmix {

void SimConfig::validate() const {
  if (protocol.cache_size < 1) throw InvalidConfig("cache_size", "must be >= 1");
  if (cycles < 1) throw InvalidConfig("cycles", "must be >= 1");
  if (top_n < 1) throw InvalidConfig("top_n", "must be >= 1");
  if (protocol.significance_threshold < 1)
    throw InvalidConfig("significance_threshold", "must be >= 1");
  if (!(bootstrap_degree >= 1.0) ||
      bootstrap_degree >= static_cast<double>(protocol.cache_size))
    throw InvalidConfig("bootstrap_degree", "must satisfy 1 <= degree < cache_size");
  if (churn.mode != ChurnMode::none) {
    if (!(churn.pct >= 0.0 && churn.pct <= 100.0))
      throw InvalidConfig("churn_pct", "must lie in [0, 100]");
    if (churn.at_cycle < 1 || churn.at_cycle > cycles)
      throw InvalidConfig("churn_cycle", "must lie in [1, cycles]");
  }
}

namespace {

// Uniform labelled tree on n >= 2 nodes via a random Pruefer sequence.
std::vector<std::pair<std::uint32_t, std::uint32_t>> random_tree(std::size_t n, Rng& rng) {
  if (n == 2) return {{0, 1}};
  std::vector<std::uint32_t> code(n - 2);
  for (auto& c : code) c = static_cast<std::uint32_t>(rng.uniform_index(n));
  std::vector<std::uint32_t> degree(n, 1);
  for (auto c : code) ++degree[c];
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> leaves;
  for (std::uint32_t v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(n - 1);
  for (auto c : code) {
    std::uint32_t leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, c);
    if (--degree[c] == 1) leaves.push(c);
  }
  std::uint32_t a = leaves.top();
  leaves.pop();
  edges.emplace_back(a, leaves.top());
  return edges;
}

bool usable(const Peer& p, std::uint32_t cycle) { return p.alive && !p.left && p.active_from <= cycle; }

}  // namespace

Topology bootstrap_topology(std::size_t n, double target_degree, std::size_t k, Rng& rng) {
  if (n < 2) throw InvalidConfig("peers", "bootstrap needs at least 2 peers");
  if (!(target_degree >= 1.0) || target_degree >= static_cast<double>(k))
    throw InvalidConfig("bootstrap_degree", "must satisfy 1 <= degree < cache_size");

  const std::size_t max_out = std::min(k - 1, n - 1);
  Topology out(n);
  bool tree_ok = false;
  for (int attempt = 0; attempt < 64 && !tree_ok; ++attempt) {
    for (auto& l : out) l.clear();
    for (auto [a, b] : random_tree(n, rng)) {
      out[a].push_back(PeerId{b});
      out[b].push_back(PeerId{a});
    }
    tree_ok = std::all_of(out.begin(), out.end(),
                          [&](const auto& l) { return l.size() <= max_out; });
  }
  if (!tree_ok) throw InvalidConfig("cache_size", "too small for a spanning tree bootstrap");

  const double max_edges = static_cast<double>(n) * static_cast<double>(max_out);
  const auto target_edges =
      static_cast<std::size_t>(std::min(std::llround(target_degree * static_cast<double>(n)),
                                        static_cast<long long>(max_edges)));
  std::size_t edges = 2 * (n - 1);
  std::vector<std::set<std::uint32_t>> present(n);
  for (std::uint32_t v = 0; v < n; ++v)
    for (PeerId w : out[v]) present[v].insert(w.value);

  while (edges < target_edges) {
    const auto u = static_cast<std::uint32_t>(rng.uniform_index(n));
    const auto v = static_cast<std::uint32_t>(rng.uniform_index(n));
    if (u == v || out[u].size() >= max_out || present[u].count(v)) continue;
    out[u].push_back(PeerId{v});
    present[u].insert(v);
    ++edges;
  }
  for (auto& l : out) std::sort(l.begin(), l.end());
  return out;
}

SimState bootstrap(const RatingMatrix& training, const SimConfig& config,
                   std::shared_ptr<const kernels::SimilarityMatrix> similarity) {
  config.validate();
  const std::size_t n = training.user_count();
  SimState state;
  state.config = config;
  state.profiles = training;
  state.rng = Rng(config.seed);
  state.bootstrap_peers = n;
  state.similarity = similarity ? std::move(similarity)
                                : std::make_shared<const kernels::SimilarityMatrix>(
                                      kernels::similarity_matrix(training));
  if (state.similarity->size() != n) throw std::invalid_argument("similarity matrix size mismatch");

  Topology topo = bootstrap_topology(n, config.bootstrap_degree, config.protocol.cache_size,
                                     state.rng);
  const ExchangePolicy policy = exchange_policy(config.protocol);
  state.peers.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    Peer& p = state.peers[v];
    p.id = PeerId{v};
    p.profile = training.snapshot(p.id);
    p.cache.capacity = policy.capacity;
    for (PeerId w : topo[v])
      p.cache.entries.push_back(make_entry(make_self_item(w, training.snapshot(w), Timestamp{0})));
    if (policy.neighbors == NeighborMode::fixed) {
      p.neighbors.reserve(n - 1);
      for (std::uint32_t w = 0; w < n; ++w)
        if (w != v) p.neighbors.push_back(PeerId{w});
    } else {
      p.neighbors = topo[v];
    }
  }
  return state;
}

namespace {

CycleSnapshot take_snapshot(SimState& state, const std::vector<std::vector<PeerId>>& voters,
                            std::vector<std::uint32_t> incoming, std::uint32_t exchanges,
                            std::uint32_t skipped) {
  const std::size_t n = state.peers.size();
  if (state.similarity->size() != n)
    state.similarity = std::make_shared<const kernels::SimilarityMatrix>(
        kernels::similarity_matrix(state.profiles));

  CycleSnapshot s;
  s.cycle = state.cycle;
  s.alive.resize(n);
  s.left.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    s.alive[v] = state.peers[v].alive ? 1 : 0;
    s.left[v] = state.peers[v].left ? 1 : 0;
  }

  auto topo = std::make_shared<Topology>(n);
  for (std::size_t v = 0; v < n; ++v) (*topo)[v] = state.peers[v].neighbors;
  if (state.last_topology && *state.last_topology == *topo)
    s.topology = state.last_topology;
  else
    s.topology = state.last_topology = std::move(topo);

  s.neighbor_similarity.assign(n, std::numeric_limits<double>::quiet_NaN());
  const auto& sim = *state.similarity;
  const Topology& t = *s.topology;
#pragma omp parallel
  {
    std::vector<double> values;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t iv = 0; iv < static_cast<std::int64_t>(n); ++iv) {
      const auto v = static_cast<std::size_t>(iv);
      if (!s.alive[v]) continue;
      values.clear();
      for (PeerId w : t[v])
        if (w.value != v) values.push_back(sim.cosine(v, w.value));
      if (!values.empty()) s.neighbor_similarity[v] = descending_mean(values);
    }
  }

  s.recommendations = kernels::recommend_batch(state.profiles, voters, s.alive, state.config.top_n);
  incoming.resize(n, 0);
  s.incoming_contacts = std::move(incoming);
  s.exchanges = exchanges;
  s.skipped_turns = skipped;
  return s;
}

}  // namespace

CycleSnapshot snapshot(SimState& state) {
  std::vector<std::vector<PeerId>> voters(state.peers.size());
  for (std::size_t v = 0; v < state.peers.size(); ++v) voters[v] = cache_sources(state.peers[v]);
  return take_snapshot(state, voters, {}, 0, 0);
}

void inject_churn(SimState& state, const ChurnSpec& spec) {
  if (!(spec.pct >= 0.0 && spec.pct <= 100.0)) throw InvalidConfig("churn_pct", "must lie in [0, 100]");
  if (spec.mode == ChurnMode::none || spec.pct == 0.0) return;

  const auto count = static_cast<std::size_t>(
      std::floor(spec.pct * static_cast<double>(state.bootstrap_peers) / 100.0));
  std::vector<std::uint32_t> live;
  for (const Peer& p : state.peers)
    if (p.alive) live.push_back(p.id.value);
  state.rng.shuffle(std::span<std::uint32_t>(live));
  const std::size_t kill = std::min(count, live.size());
  for (std::size_t i = 0; i < kill; ++i) {
    Peer& p = state.peers[live[i]];
    p.alive = false;
    p.left = spec.mode == ChurnMode::leavings;
  }
}

CycleSnapshot run_cycle(SimState& state) {
  state.cycle += 1;
  const std::uint32_t now = state.cycle;
  const ChurnSpec& churn = state.config.churn;
  if (churn.mode != ChurnMode::none && churn.at_cycle == now) inject_churn(state, churn);

  const std::size_t n = state.peers.size();
  std::vector<std::uint32_t> order;
  for (const Peer& p : state.peers)
    if (usable(p, now)) order.push_back(p.id.value);
  state.rng.shuffle(std::span<std::uint32_t>(order));

  std::vector<std::uint32_t> incoming(n, 0);
  std::vector<std::vector<PeerId>> voters(n);
  std::vector<std::uint8_t> took_turn(n, 0);
  std::uint32_t exchanges = 0, skipped = 0;
  std::vector<PeerId> candidates;

  for (std::uint32_t v : order) {
    Peer& self = state.peers[v];
    candidates.clear();
    for (PeerId w : self.neighbors)
      if (w.value != v && w.value < n && state.peers[w.value].alive) candidates.push_back(w);
    if (candidates.empty()) {
      ++skipped;
    } else {
      PeerId w = candidates[state.rng.uniform_index(candidates.size())];
      swarmix_exchange(self, state.peers[w.value], state.config.protocol, Timestamp{now});
      ++incoming[w.value];
      ++exchanges;
    }
    voters[v] = cache_sources(self);
    took_turn[v] = 1;
  }
  // Live peers that did not initiate (joined this cycle) still get a list.
  for (std::size_t v = 0; v < n; ++v)
    if (!took_turn[v] && state.peers[v].alive) voters[v] = cache_sources(state.peers[v]);

  return take_snapshot(state, voters, std::move(incoming), exchanges, skipped);
}

void join(SimState& state, PeerId new_peer, PeerId buddy, RatingProfile profile) {
  if (new_peer.value != state.peers.size())
    throw InvalidConfig("peer", "joining peer must take the next unused id");
  if (buddy.value >= state.peers.size())
    throw BuddyUnreachable("buddy " + std::to_string(buddy.value) + " is unknown");
  if (profile.empty()) throw EmptyProfile();
  const Peer& b = state.peers[buddy.value];
  if (!b.alive || b.left)
    throw BuddyUnreachable("buddy " + std::to_string(buddy.value) + " is not online");
  state.profiles.add_user(std::move(profile));
  Peer p = make_joining_peer(new_peer, state.profiles.snapshot(new_peer), b, Timestamp{state.cycle},
                             state.config.protocol);
  state.peers.push_back(std::move(p));
}

std::vector<CycleSnapshot> run_simulation(const SimConfig& config, const RatingMatrix& training,
                                          std::shared_ptr<const kernels::SimilarityMatrix> similarity,
                                          const CycleHook& hook) {
  SimState state = bootstrap(training, config, std::move(similarity));
  std::vector<CycleSnapshot> out;
  out.reserve(config.cycles + 1);
  out.push_back(snapshot(state));
  if (hook) hook(state, out.back());
  for (std::uint32_t c = 0; c < config.cycles; ++c) {
    out.push_back(run_cycle(state));
    if (hook) hook(state, out.back());
  }
  return out;
}

}  // namespace swarmix
