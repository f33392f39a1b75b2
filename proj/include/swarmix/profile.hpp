#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarmix/types.hpp"

namespace swarmix {

struct Rating {
  ItemId item;
  std::uint8_t value = 0;  // 1..5

  bool operator==(const Rating&) const = default;
};

// Sparse rating row, sorted by item. Ratings are validated to lie in 1..5.
class RatingProfile {
 public:
  RatingProfile() = default;
  explicit RatingProfile(std::vector<Rating> ratings);

  std::span<const Rating> ratings() const noexcept { return ratings_; }
  std::size_t size() const noexcept { return ratings_.size(); }
  bool empty() const noexcept { return ratings_.empty(); }
  std::int64_t norm_squared() const noexcept { return norm_squared_; }

  bool contains(ItemId item) const noexcept;
  std::optional<std::uint8_t> rating(ItemId item) const noexcept;

  bool operator==(const RatingProfile& other) const { return ratings_ == other.ratings_; }

 private:
  std::vector<Rating> ratings_;
  std::int64_t norm_squared_ = 0;
};

struct Overlap {
  std::int64_t dot = 0;       // <v, w>, exact in integers
  std::uint32_t co_rated = 0;  // items rated by both
};

Overlap overlap(const RatingProfile& v, const RatingProfile& w) noexcept;

// Shared by every code path that turns integer parts into a cosine so the
// same pair always yields bit-identical values (and sim(v,w) == sim(w,v)).
inline double cosine_from_parts(std::int64_t dot, std::int64_t norm_sq_v,
                                std::int64_t norm_sq_w) noexcept {
  if (dot == 0) return 0.0;
  return static_cast<double>(dot) /
         (std::sqrt(static_cast<double>(norm_sq_v)) * std::sqrt(static_cast<double>(norm_sq_w)));
}

double significance_weight(std::uint32_t co_rated, unsigned threshold) noexcept;

// Cosine over the union of rated items, unrated = 0. Throws EmptyProfile.
double cosine_similarity(const RatingProfile& v, const RatingProfile& w);

// Cosine devalued by min(co_rated, threshold) / threshold.
double significance_weighted_similarity(const RatingProfile& v, const RatingProfile& w,
                                        unsigned threshold);

enum class SimilarityKind { cosine, significance_weighted };

}  // namespace swarmix

