// Serial reference vs OpenMP kernels on synthetic data of MovieLens-like size.

#include <benchmark/benchmark.h>

#include "swarmix/graph.hpp"
#include "swarmix/kernels.hpp"
#include "synthetic.hpp"

namespace {

using namespace swarmix;

const RatingMatrix& ratings() {
  static const RatingMatrix m = testing::synthetic_ratings(
      {.users = 943, .items = 1682, .groups = 19, .min_ratings = 20, .max_ratings = 200, .seed = 7});
  return m;
}

const UndirectedGraph& graph() {
  static const UndirectedGraph g =
      UndirectedGraph::symmetrize(testing::random_topology(943, 12, 11), {});
  return g;
}

std::vector<std::vector<PeerId>> neighbourhoods() {
  return testing::random_topology(ratings().user_count(), 20, 5);
}

template <auto Fn>
void similarity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(ratings()));
}

template <auto Fn>
void recommend(benchmark::State& state) {
  const auto nb = neighbourhoods();
  const std::vector<std::uint8_t> active(nb.size(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(ratings(), nb, active, 10));
}

template <auto Fn>
void graph_kernel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(graph()));
}

BENCHMARK(similarity<kernels::serial::similarity_matrix>)->Name("similarity/serial")->UseRealTime();
BENCHMARK(similarity<kernels::parallel::similarity_matrix>)->Name("similarity/parallel")->UseRealTime();
BENCHMARK(recommend<kernels::serial::recommend_batch>)->Name("recommend/serial")->UseRealTime();
BENCHMARK(recommend<kernels::parallel::recommend_batch>)->Name("recommend/parallel")->UseRealTime();
BENCHMARK(graph_kernel<kernels::serial::average_path_length>)->Name("path_length/serial")->UseRealTime();
BENCHMARK(graph_kernel<kernels::parallel::average_path_length>)->Name("path_length/parallel")->UseRealTime();
BENCHMARK(graph_kernel<kernels::serial::local_clustering>)->Name("clustering/serial")->UseRealTime();
BENCHMARK(graph_kernel<kernels::parallel::local_clustering>)->Name("clustering/parallel")->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
