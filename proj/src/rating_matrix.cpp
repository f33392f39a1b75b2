#include "swarmix/rating_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "swarmix/errors.hpp"

namespace swarmix {

RatingMatrix::RatingMatrix(std::vector<ProfileSnapshot> rows, std::size_t item_count)
    : rows_(std::move(rows)), item_count_(item_count) {
  for (const auto& row : rows_) {
    if (!row) throw std::invalid_argument("null profile row");
    for (const Rating& r : row->ratings())
      if (r.item.value >= item_count_) throw std::invalid_argument("item id out of range");
  }
}

std::size_t RatingMatrix::rating_count() const noexcept {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row->size();
  return n;
}

PeerId RatingMatrix::add_user(RatingProfile profile) {
  for (const Rating& r : profile.ratings())
    if (r.item.value >= item_count_) throw std::invalid_argument("item id out of range");
  rows_.push_back(std::make_shared<const RatingProfile>(std::move(profile)));
  return PeerId{static_cast<std::uint32_t>(rows_.size() - 1)};
}

DatasetInfo describe(const RatingMatrix& m) {
  DatasetInfo info{m.user_count(), m.item_count(), m.rating_count(), 0};
  if (m.user_count() > 0) {
    info.min_ratings_per_user = m.rows().front()->size();
    for (const auto& row : m.rows())
      info.min_ratings_per_user = std::min(info.min_ratings_per_user, row->size());
  }
  return info;
}

namespace {

template <class T>
bool parse_number(std::string_view token, T& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

RatingMatrix parse_ratings(const std::string& text) {
  struct Raw {
    std::int64_t user, item;
    int rating;
  };
  std::vector<Raw> raw;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 3 || fields.size() > 4)
      throw ParseError("line " + std::to_string(line_no) + ": expected 3 or 4 fields");
    Raw r{};
    double rating = 0;
    if (!parse_number(fields[0], r.user) || !parse_number(fields[1], r.item) ||
        !parse_number(fields[2], rating))
      throw ParseError("line " + std::to_string(line_no) + ": malformed number");
    if (rating != static_cast<int>(rating) || rating < 1 || rating > 5)
      throw RangeError("line " + std::to_string(line_no) + ": rating " +
                       std::string(fields[2]) + " outside 1..5");
    r.rating = static_cast<int>(rating);
    raw.push_back(r);
  }
  if (raw.empty()) throw ParseError("no ratings found");

  std::map<std::int64_t, std::uint32_t> user_index, item_index;
  for (const Raw& r : raw) {
    user_index.emplace(r.user, 0);
    item_index.emplace(r.item, 0);
  }
  std::vector<std::int64_t> user_labels, item_labels;
  for (auto& [label, idx] : user_index) {
    idx = static_cast<std::uint32_t>(user_labels.size());
    user_labels.push_back(label);
  }
  for (auto& [label, idx] : item_index) {
    idx = static_cast<std::uint32_t>(item_labels.size());
    item_labels.push_back(label);
  }

  std::vector<std::vector<Rating>> rows(user_labels.size());
  for (const Raw& r : raw)
    rows[user_index[r.user]].push_back(
        {ItemId{item_index[r.item]}, static_cast<std::uint8_t>(r.rating)});

  std::vector<ProfileSnapshot> profiles;
  profiles.reserve(rows.size());
  for (std::size_t u = 0; u < rows.size(); ++u) {
    try {
      profiles.push_back(std::make_shared<const RatingProfile>(std::move(rows[u])));
    } catch (const std::invalid_argument&) {
      throw ParseError("user " + std::to_string(user_labels[u]) + " rates an item twice");
    }
  }
  RatingMatrix m(std::move(profiles), item_labels.size());
  m.user_labels = std::move(user_labels);
  m.item_labels = std::move(item_labels);
  return m;
}

RatingMatrix load_ratings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ratings(buf.str());
}

}  // namespace swarmix
