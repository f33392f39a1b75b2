#pragma once

// General epidemic push-pull protocol: a data model plus the three
// exchangeable steps (merge, select, neighbourhood adaptation). Anti-entropy,
// Newscast and Swarmix are configurations of the same engine.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "swarmix/errors.hpp"
#include "swarmix/types.hpp"

namespace swarmix {

// Anything that can live in a GEP3 cache. Accessors are found by ADL so
// entry types may wrap their payload however they like.
template <class E>
concept Gep3Item = std::copyable<E> && requires(const E& e) {
  { item_id(e) } -> std::same_as<DataId>;
  { item_source(e) } -> std::same_as<PeerId>;
  { item_time(e) } -> std::same_as<Timestamp>;
};

template <class Payload>
struct DataItem {
  DataId id;
  PeerId src;
  Timestamp timestamp;
  Payload payload{};

  bool operator==(const DataItem&) const = default;
};

template <class Payload>
DataId item_id(const DataItem<Payload>& d) { return d.id; }
template <class Payload>
PeerId item_source(const DataItem<Payload>& d) { return d.src; }
template <class Payload>
Timestamp item_time(const DataItem<Payload>& d) { return d.timestamp; }

inline constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

template <Gep3Item E>
struct Cache {
  std::vector<E> entries;
  std::size_t capacity = unbounded;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }

  const E* find(DataId id) const {
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const E& e) { return item_id(e) == id; });
    return it == entries.end() ? nullptr : &*it;
  }

  bool operator==(const Cache&) const = default;
};

// Utility of a single item from the perspective of one owning peer.
template <class E>
using UtilityFn = std::function<double(const E&)>;

template <Gep3Item E>
UtilityFn<E> timestamp_utility() {
  return [](const E& e) { return static_cast<double>(item_time(e).value); };
}

namespace detail {

// One winner per id over a ++ b. `better(x, y)` is a strict preference; on
// no strict preference the earlier candidate (cache_a's copy) stays.
template <Gep3Item E, class Key, class Better>
std::vector<E> best_per_id(const std::vector<E>& a, const std::vector<E>& b, Key key,
                           Better better) {
  using K = decltype(key(a.front()));
  struct Candidate {
    const E* entry;
    K key;
    std::size_t order;
  };
  std::vector<Candidate> all;
  all.reserve(a.size() + b.size());
  std::size_t order = 0;
  for (const E& e : a) all.push_back({&e, key(e), order++});
  for (const E& e : b) all.push_back({&e, key(e), order++});
  std::sort(all.begin(), all.end(), [](const Candidate& x, const Candidate& y) {
    if (item_id(*x.entry) != item_id(*y.entry)) return item_id(*x.entry) < item_id(*y.entry);
    return x.order < y.order;
  });

  std::vector<E> out;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t best = i;
    std::size_t j = i + 1;
    for (; j < all.size() && item_id(*all[j].entry) == item_id(*all[i].entry); ++j) {
      if (better(all[j].key, all[best].key)) best = j;
    }
    out.push_back(*all[best].entry);
    i = j;
  }
  return out;
}

template <Gep3Item E>
std::vector<std::size_t> rank_by_utility(std::span<const E> items, std::span<const double> score) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (score[x] != score[y]) return score[x] > score[y];
    if (item_source(items[x]) != item_source(items[y]))
      return item_source(items[x]) < item_source(items[y]);
    return item_id(items[x]) < item_id(items[y]);
  });
  return order;
}

}  // namespace detail

// Keeps the most recent version of every id; equal timestamps keep cache_a's
// copy. Result is ordered by id and carries cache_a's capacity.
template <Gep3Item E>
Cache<E> merge_freshest(const Cache<E>& cache_a, const Cache<E>& cache_b) {
  auto entries = detail::best_per_id(
      cache_a.entries, cache_b.entries, [](const E& e) { return item_time(e); },
      [](Timestamp x, Timestamp y) { return x > y; });
  return Cache<E>{std::move(entries), cache_a.capacity};
}

// Keeps the most useful version of every id under the merging peer's utility;
// ties go to the larger timestamp, then to cache_a's copy.
template <Gep3Item E>
Cache<E> merge_by_utility(const Cache<E>& cache_a, const Cache<E>& cache_b,
                          const UtilityFn<E>& u) {
  auto entries = detail::best_per_id(
      cache_a.entries, cache_b.entries,
      [&](const E& e) { return std::pair{u(e), item_time(e)}; },
      [](const std::pair<double, Timestamp>& x, const std::pair<double, Timestamp>& y) {
        return x > y;
      });
  return Cache<E>{std::move(entries), cache_a.capacity};
}

// The k most useful items in descending utility order (ties: smaller source).
template <Gep3Item E>
Cache<E> select_top_k(const Cache<E>& cache, const UtilityFn<E>& u, std::size_t k) {
  std::vector<double> score(cache.entries.size());
  std::transform(cache.entries.begin(), cache.entries.end(), score.begin(), u);
  auto order = detail::rank_by_utility<E>(cache.entries, score);
  order.resize(std::min(order.size(), k));

  Cache<E> out{{}, cache.capacity};
  out.entries.reserve(order.size());
  for (std::size_t i : order) out.entries.push_back(cache.entries[i]);
  return out;
}

enum class NeighborMode { fixed, adaptive };

// Sources of the l most useful items (the owner itself never counts), or the
// prior neighbourhood unchanged in fixed mode. Result is sorted by id.
template <Gep3Item E>
std::vector<PeerId> adapt_neighbors(const Cache<E>& selected, const UtilityFn<E>& u, std::size_t l,
                                    NeighborMode mode, std::span<const PeerId> prior,
                                    PeerId owner) {
  if (mode == NeighborMode::fixed) return {prior.begin(), prior.end()};

  std::vector<double> score(selected.entries.size());
  std::transform(selected.entries.begin(), selected.entries.end(), score.begin(), u);
  auto order = detail::rank_by_utility<E>(selected.entries, score);
  order.resize(std::min(order.size(), l));

  std::vector<PeerId> out;
  for (std::size_t i : order) {
    PeerId src = item_source(selected.entries[i]);
    if (src != owner) out.push_back(src);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

enum class MergeRule { freshest, utility };

struct ExchangePolicy {
  MergeRule merge = MergeRule::utility;
  std::size_t capacity = 20;  // k
  NeighborMode neighbors = NeighborMode::adaptive;
  std::size_t neighbor_count = 20;  // l
  // Anti-entropy replicates every entry including the peer's own; partial-view
  // protocols drop the owner's item after merging so it never takes a slot.
  bool keep_own_item = false;
};

template <Gep3Item E>
struct Gep3Peer {
  PeerId id;
  Cache<E> cache;
  std::vector<PeerId> neighbors;  // Q_v, sorted
  bool alive = true;
};

namespace detail {

template <Gep3Item E>
void absorb(Gep3Peer<E>& self, const Cache<E>& own, const Cache<E>& remote,
            const ExchangePolicy& policy, const UtilityFn<E>& u) {
  Cache<E> merged = policy.merge == MergeRule::freshest ? merge_freshest(own, remote)
                                                        : merge_by_utility(own, remote, u);
  if (!policy.keep_own_item) {
    std::erase_if(merged.entries,
                  [&](const E& e) { return item_id(e) == DataId{self.id.value}; });
  }
  merged.capacity = policy.capacity;
  Cache<E> selected = select_top_k(merged, u, policy.capacity);
  self.neighbors =
      adapt_neighbors(selected, u, policy.neighbor_count, policy.neighbors, self.neighbors, self.id);
  self.cache = std::move(selected);
}

}  // namespace detail

// One push-pull session, applied atomically. Both sides see the other's
// pre-exchange cache and run merge -> select -> adapt with their own utility.
template <Gep3Item E>
void run_exchange(Gep3Peer<E>& initiator, Gep3Peer<E>& responder, const ExchangePolicy& policy,
                  const UtilityFn<E>& initiator_utility, const UtilityFn<E>& responder_utility) {
  if (initiator.id == responder.id) throw std::invalid_argument("peer cannot exchange with itself");
  if (!responder.alive) throw ResponderUnreachable("peer " + std::to_string(responder.id.value));

  const Cache<E> pushed = initiator.cache;
  const Cache<E> pulled = responder.cache;
  detail::absorb(initiator, pushed, pulled, policy, initiator_utility);
  detail::absorb(responder, pulled, pushed, policy, responder_utility);
}

}  // namespace swarmix
