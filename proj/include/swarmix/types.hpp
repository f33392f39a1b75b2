#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace swarmix {

// Tagged integer so peer ids, item ids and timestamps cannot be mixed up.
template <class Tag, class Rep>
struct StrongId {
  using rep_type = Rep;
  Rep value{};

  constexpr auto operator<=>(const StrongId&) const = default;
};

struct PeerTag;
struct TimeTag;
struct DataTag;
struct ItemTag;

using PeerId = StrongId<PeerTag, std::uint32_t>;
// Logical time: the cycle number at which a data item was created.
using Timestamp = StrongId<TimeTag, std::uint32_t>;
// Identity of a disseminated data item (a GEP3 datum, not a rated movie).
using DataId = StrongId<DataTag, std::uint64_t>;
// Dense index of a rated catalogue item.
using ItemId = StrongId<ItemTag, std::uint32_t>;

}  // namespace swarmix

template <class Tag, class Rep>
struct std::hash<swarmix::StrongId<Tag, Rep>> {
  std::size_t operator()(const swarmix::StrongId<Tag, Rep>& id) const noexcept {
    return std::hash<Rep>{}(id.value);
  }
};
