#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "swarmix/profile.hpp"
#include "swarmix/types.hpp"

namespace swarmix {

// Profiles are immutable once published so a snapshot can be shared between
// the rating matrix, cache entries and simulation state without copying.
using ProfileSnapshot = std::shared_ptr<const RatingProfile>;

// Users x items. Row index == PeerId. Item ids are dense [0, item_count).
class RatingMatrix {
 public:
  RatingMatrix() = default;
  RatingMatrix(std::vector<ProfileSnapshot> rows, std::size_t item_count);

  std::size_t user_count() const noexcept { return rows_.size(); }
  std::size_t item_count() const noexcept { return item_count_; }
  std::size_t rating_count() const noexcept;

  const RatingProfile& row(PeerId user) const { return *rows_.at(user.value); }
  const ProfileSnapshot& snapshot(PeerId user) const { return rows_.at(user.value); }
  const std::vector<ProfileSnapshot>& rows() const noexcept { return rows_; }

  // Appends a row and returns its PeerId.
  PeerId add_user(RatingProfile profile);

  // Original dataset labels, kept for reporting. Optional.
  std::vector<std::int64_t> user_labels;
  std::vector<std::int64_t> item_labels;

 private:
  std::vector<ProfileSnapshot> rows_;
  std::size_t item_count_ = 0;
};

struct DatasetInfo {
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t ratings = 0;
  std::size_t min_ratings_per_user = 0;
};

DatasetInfo describe(const RatingMatrix& m);

// MovieLens u.data layout: user TAB item TAB rating TAB timestamp, one per
// line (timestamp ignored; any whitespace accepted as separator). Labels are
// remapped to dense ids in order of first appearance after sorting by label.
// Throws IoError, ParseError (malformed line, empty file, duplicate pair) or
// RangeError (rating outside 1..5).
RatingMatrix load_ratings(const std::filesystem::path& path);
RatingMatrix parse_ratings(const std::string& text);

}  // namespace swarmix
