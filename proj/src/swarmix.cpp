#include "swarmix/swarmix.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "swarmix/errors.hpp"

namespace swarmix {

SwarmixItem make_self_item(PeerId peer, const RatingProfile& profile, Timestamp now) {
  if (profile.empty()) throw EmptyProfile();
  return SwarmixItem{peer, now, std::make_shared<const RatingProfile>(profile)};
}

SwarmixItem make_self_item(PeerId peer, const ProfileSnapshot& profile, Timestamp now) {
  if (!profile || profile->empty()) throw EmptyProfile();
  return SwarmixItem{peer, now, profile};
}

ExchangePolicy exchange_policy(const ProtocolConfig& config) {
  switch (config.protocol) {
    case Protocol::swarmix:
      return {MergeRule::utility, config.cache_size, NeighborMode::adaptive, config.cache_size,
              false};
    case Protocol::newscast:
      return {MergeRule::freshest, config.cache_size, NeighborMode::adaptive, config.cache_size,
              false};
    case Protocol::anti_entropy:
      return {MergeRule::freshest, unbounded, NeighborMode::fixed, unbounded, true};
  }
  return {};
}

namespace {

// Owner's ratings scattered into a dense row so each item costs one pass over
// the item's own ratings. Integer dot products keep the result bit-identical
// to cosine_similarity().
struct DenseOwner {
  std::vector<std::uint8_t> rating;
  std::int64_t norm_squared;
  // Keyed by snapshot address; the held snapshot pins the address.
  std::unordered_map<const RatingProfile*, std::pair<ProfileSnapshot, double>> memo;

  explicit DenseOwner(const RatingProfile& owner) : norm_squared(owner.norm_squared()) {
    std::uint32_t max_item = 0;
    for (const Rating& r : owner.ratings()) max_item = std::max(max_item, r.item.value);
    rating.assign(owner.empty() ? 0 : max_item + 1, 0);
    for (const Rating& r : owner.ratings()) rating[r.item.value] = r.value;
  }

  Overlap overlap_with(const RatingProfile& other) const {
    Overlap o;
    for (const Rating& r : other.ratings()) {
      if (r.item.value >= rating.size()) break;
      const std::uint8_t x = rating[r.item.value];
      o.dot += std::int64_t{x} * r.value;
      o.co_rated += x != 0;
    }
    return o;
  }
};

}  // namespace

UtilityFn<CacheEntry> make_utility(const ProtocolConfig& config, const RatingProfile& owner) {
  if (config.protocol != Protocol::swarmix) return timestamp_utility<CacheEntry>();
  if (owner.empty()) throw EmptyProfile();
  auto dense = std::make_shared<DenseOwner>(owner);
  const bool weighted = config.utility == SimilarityKind::significance_weighted;
  const unsigned threshold = config.significance_threshold;
  return [dense, weighted, threshold](const CacheEntry& e) {
    const RatingProfile* other = e.item.profile.get();
    if (auto it = dense->memo.find(other); it != dense->memo.end()) return it->second.second;
    if (other->empty()) throw EmptyProfile();
    const Overlap o = dense->overlap_with(*other);
    const double cos = cosine_from_parts(o.dot, dense->norm_squared, other->norm_squared());
    const double u = weighted ? cos * significance_weight(o.co_rated, threshold) : cos;
    dense->memo.emplace(other, std::pair{e.item.profile, u});
    return u;
  };
}

void inject_self_item(Peer& peer, Timestamp now) {
  CacheEntry fresh = make_entry(make_self_item(peer.id, peer.profile, now));
  auto& entries = peer.cache.entries;
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const CacheEntry& e) { return e.item.peer_id == peer.id; });
  if (it != entries.end())
    *it = std::move(fresh);
  else
    entries.push_back(std::move(fresh));
}

void swarmix_exchange(Peer& initiator, Peer& responder, const ProtocolConfig& config,
                      Timestamp now) {
  if (!responder.alive) throw ResponderUnreachable("peer " + std::to_string(responder.id.value));
  inject_self_item(initiator, now);
  auto u_initiator = make_utility(config, *initiator.profile);
  auto u_responder = make_utility(config, *responder.profile);
  run_exchange<CacheEntry>(initiator, responder, exchange_policy(config), u_initiator,
                           u_responder);
}

std::vector<PeerId> cache_sources(const Peer& peer) {
  std::vector<PeerId> out;
  out.reserve(peer.cache.size());
  for (const CacheEntry& e : peer.cache.entries)
    if (e.item.peer_id != peer.id) out.push_back(e.item.peer_id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Peer make_joining_peer(PeerId new_peer, ProfileSnapshot profile, const Peer& buddy,
                       Timestamp now, const ProtocolConfig& config) {
  if (!buddy.alive || buddy.left)
    throw BuddyUnreachable("buddy " + std::to_string(buddy.id.value) + " is not online");
  if (buddy.id == new_peer) throw std::invalid_argument("peer cannot be its own buddy");
  Peer p;
  p.id = new_peer;
  p.profile = std::move(profile);
  p.cache.capacity = exchange_policy(config).capacity;
  p.cache.entries.push_back(make_entry(make_self_item(buddy.id, buddy.profile, now)));
  p.neighbors = {buddy.id};
  p.alive = true;
  p.active_from = now.value + 1;
  return p;
}

}  // namespace swarmix
