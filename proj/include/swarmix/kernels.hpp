#pragma once

// Data-parallel kernels. Each has a serial reference implementation in
// kernels::serial and an OpenMP implementation in kernels::parallel; the two
// must return bit-identical results (tests compare them, bench/ times them).
// The unqualified names dispatch to the parallel versions.

#include <cstdint>
#include <span>
#include <vector>

#include "swarmix/graph.hpp"
#include "swarmix/profile.hpp"
#include "swarmix/rating_matrix.hpp"
#include "swarmix/recommender.hpp"

namespace swarmix::kernels {

// Dense all-pairs cosine similarity and co-rated counts of a rating matrix.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t n) : n_(n), cosine_(n * n, 0.0), co_rated_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  double cosine(std::size_t v, std::size_t w) const noexcept { return cosine_[v * n_ + w]; }
  std::uint32_t co_rated(std::size_t v, std::size_t w) const noexcept {
    return co_rated_[v * n_ + w];
  }
  double weighted(std::size_t v, std::size_t w, unsigned threshold) const noexcept {
    return cosine(v, w) * significance_weight(co_rated(v, w), threshold);
  }

  void set(std::size_t v, std::size_t w, double cos, std::uint32_t co) noexcept {
    cosine_[v * n_ + w] = cos;
    co_rated_[v * n_ + w] = co;
  }

  bool operator==(const SimilarityMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> cosine_;
  std::vector<std::uint32_t> co_rated_;
};

struct PathLengthResult {
  double average = 0.0;          // over ordered pairs of the largest component
  double coverage = 0.0;         // |largest component| / |members|
  std::size_t component_size = 0;

  bool operator==(const PathLengthResult&) const = default;
};

// Diagonal is zero. Every row must be non-empty (EmptyProfile otherwise).
namespace serial {
SimilarityMatrix similarity_matrix(const RatingMatrix& ratings);
// Lists for peers with active[v] == 0 are left empty.
std::vector<RecommendationList> recommend_batch(const RatingMatrix& ratings,
                                                std::span<const std::vector<PeerId>> neighbors,
                                                std::span<const std::uint8_t> active,
                                                std::size_t n);
PathLengthResult average_path_length(const UndirectedGraph& g);
// Per-node Watts-Strogatz coefficients; NaN for non-members and degree < 2.
std::vector<double> local_clustering(const UndirectedGraph& g);
}  // namespace serial

namespace parallel {
SimilarityMatrix similarity_matrix(const RatingMatrix& ratings);
std::vector<RecommendationList> recommend_batch(const RatingMatrix& ratings,
                                                std::span<const std::vector<PeerId>> neighbors,
                                                std::span<const std::uint8_t> active,
                                                std::size_t n);
PathLengthResult average_path_length(const UndirectedGraph& g);
std::vector<double> local_clustering(const UndirectedGraph& g);
}  // namespace parallel

using parallel::average_path_length;
using parallel::local_clustering;
using parallel::recommend_batch;
using parallel::similarity_matrix;

}  // namespace swarmix::kernels
