#include "swarmix/profile.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "swarmix/errors.hpp"

namespace swarmix {

RatingProfile::RatingProfile(std::vector<Rating> ratings) : ratings_(std::move(ratings)) {
  std::sort(ratings_.begin(), ratings_.end(),
            [](const Rating& a, const Rating& b) { return a.item < b.item; });
  for (std::size_t i = 0; i < ratings_.size(); ++i) {
    const Rating& r = ratings_[i];
    if (r.value < 1 || r.value > 5)
      throw RangeError("rating " + std::to_string(r.value) + " for item " +
                       std::to_string(r.item.value) + " outside 1..5");
    if (i > 0 && ratings_[i - 1].item == r.item)
      throw std::invalid_argument("duplicate rating for item " + std::to_string(r.item.value));
    norm_squared_ += std::int64_t{r.value} * r.value;
  }
}

bool RatingProfile::contains(ItemId item) const noexcept { return rating(item).has_value(); }

std::optional<std::uint8_t> RatingProfile::rating(ItemId item) const noexcept {
  auto it = std::lower_bound(ratings_.begin(), ratings_.end(), item,
                             [](const Rating& r, ItemId id) { return r.item < id; });
  if (it == ratings_.end() || it->item != item) return std::nullopt;
  return it->value;
}

Overlap overlap(const RatingProfile& v, const RatingProfile& w) noexcept {
  Overlap out;
  auto a = v.ratings();
  auto b = w.ratings();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].item < b[j].item) {
      ++i;
    } else if (b[j].item < a[i].item) {
      ++j;
    } else {
      out.dot += std::int64_t{a[i].value} * b[j].value;
      ++out.co_rated;
      ++i;
      ++j;
    }
  }
  return out;
}

double significance_weight(std::uint32_t co_rated, unsigned threshold) noexcept {
  if (co_rated >= threshold) return 1.0;
  return static_cast<double>(co_rated) / static_cast<double>(threshold);
}

double cosine_similarity(const RatingProfile& v, const RatingProfile& w) {
  if (v.empty() || w.empty()) throw EmptyProfile();
  return cosine_from_parts(overlap(v, w).dot, v.norm_squared(), w.norm_squared());
}

double significance_weighted_similarity(const RatingProfile& v, const RatingProfile& w,
                                        unsigned threshold) {
  if (threshold == 0) throw InvalidConfig("significance_threshold", "must be positive");
  if (v.empty() || w.empty()) throw EmptyProfile();
  Overlap o = overlap(v, w);
  return cosine_from_parts(o.dot, v.norm_squared(), w.norm_squared()) *
         significance_weight(o.co_rated, threshold);
}

}  // namespace swarmix
