#pragma once

// Swarmix instance of GEP3: items carry rating-profile snapshots, utility is
// profile similarity, and a peer's neighbourhood is exactly the set of peers
// named in its cache.

#include <cstdint>
#include <span>
#include <vector>

#include "swarmix/gep3.hpp"
#include "swarmix/profile.hpp"
#include "swarmix/rating_matrix.hpp"
#include "swarmix/types.hpp"

namespace swarmix {

// id == src == peer_id: each peer originates exactly one item.
struct SwarmixItem {
  PeerId peer_id;
  Timestamp timestamp;
  ProfileSnapshot profile;

  bool operator==(const SwarmixItem&) const = default;
};

struct CacheEntry {
  SwarmixItem item;
  PeerId address;  // contact handle; in simulation the peer id itself

  bool operator==(const CacheEntry&) const = default;
};

inline DataId item_id(const CacheEntry& e) { return DataId{e.item.peer_id.value}; }
inline PeerId item_source(const CacheEntry& e) { return e.item.peer_id; }
inline Timestamp item_time(const CacheEntry& e) { return e.item.timestamp; }

// Deep-copies `profile`; later edits to the live profile do not reach the
// item. Throws EmptyProfile.
SwarmixItem make_self_item(PeerId peer, const RatingProfile& profile, Timestamp now);
// Reuses an already-immutable snapshot.
SwarmixItem make_self_item(PeerId peer, const ProfileSnapshot& profile, Timestamp now);

inline CacheEntry make_entry(SwarmixItem item) {
  PeerId address = item.peer_id;
  return CacheEntry{std::move(item), address};
}

enum class Protocol { swarmix, newscast, anti_entropy };

struct ProtocolConfig {
  Protocol protocol = Protocol::swarmix;
  std::size_t cache_size = 20;
  SimilarityKind utility = SimilarityKind::significance_weighted;
  unsigned significance_threshold = 50;

  bool operator==(const ProtocolConfig&) const = default;
};

// Merge/select/adapt configuration for each protocol variant:
//   swarmix      merge by similarity, top-k by similarity, Q = cache sources
//   newscast     merge by freshness,  top-k by freshness,  Q = cache sources
//   anti-entropy merge by freshness,  keep everything,     Q = V (fixed)
ExchangePolicy exchange_policy(const ProtocolConfig& config);

// Utility from `owner`'s perspective, computed from the snapshot inside each
// item (not from a live lookup). Throws EmptyProfile.
UtilityFn<CacheEntry> make_utility(const ProtocolConfig& config, const RatingProfile& owner);

struct Peer : Gep3Peer<CacheEntry> {
  ProfileSnapshot profile;
  bool left = false;
  std::uint32_t active_from = 0;  // first cycle in which the peer initiates
};

// Adds (or refreshes) the peer's own item in its cache prior to a push.
void inject_self_item(Peer& peer, Timestamp now);

// Initiator injects a fresh self item, then both sides run merge -> select ->
// adapt with their own utility. Throws ResponderUnreachable.
void swarmix_exchange(Peer& initiator, Peer& responder, const ProtocolConfig& config,
                      Timestamp now);

// Sources named in the cache, excluding the owner; sorted.
std::vector<PeerId> cache_sources(const Peer& peer);

// New peer whose cache holds exactly `buddy`'s entry. Throws BuddyUnreachable
// if the buddy is dead or unknown.
Peer make_joining_peer(PeerId new_peer, ProfileSnapshot profile, const Peer& buddy,
                       Timestamp now, const ProtocolConfig& config);

}  // namespace swarmix
