#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <cstdint>
#include <vector>

#include "swarmix/graph.hpp"
#include "swarmix/kernels.hpp"

namespace swarmix::kernels::detail {

void check_rows(const RatingMatrix& ratings);

// Fills row v (columns w > v, mirrored) using `dense` as scratch of size
// item_count, zeroed on entry and on exit.
void similarity_row(const RatingMatrix& ratings, std::size_t v, std::vector<std::uint8_t>& dense,
                    SimilarityMatrix& out);

// Sum of BFS distances from `source` to every node (all reachable within the
// component); `dist` is scratch of node_count entries, all -1 on entry/exit.
std::uint64_t bfs_distance_sum(const UndirectedGraph& g, std::uint32_t source,
                               std::vector<std::int32_t>& dist, std::vector<std::uint32_t>& queue);

// Coefficient of node v; `mark` is scratch of node_count zeros.
double node_clustering(const UndirectedGraph& g, std::uint32_t v,
                       std::vector<std::uint8_t>& mark);

PathLengthResult finish_path_length(const UndirectedGraph& g, std::size_t component_size,
                                    std::uint64_t distance_sum);

}  // namespace swarmix::kernels::detail
