// Serial reference vs OpenMP kernel for each parallel hot path. Set
// STW_THREADS (or OMP_NUM_THREADS) to choose the parallel width.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "stw/detect.hpp"
#include "stw/graph.hpp"
#include "stw/tree.hpp"
#include "stw/wavelet.hpp"

namespace {

using namespace stw;

PointCloud points(int n) {
  Rng rng(11);
  return uniform_points(n, 2, rng);
}

template <bool Parallel>
void BM_apply_basis(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Graph g = gen_torus(side, 2);
  Rng rng(1);
  const WaveletBasis b = build_basis(sample_ust(g, rng));
  std::normal_distribution<double> z;
  std::vector<double> y(g.num_vertices());
  for (auto& v : y) v = z(rng);
  for (auto _ : state) {
    auto c = Parallel ? apply_basis(b, y) : apply_basis_serial(b, y);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * g.num_vertices());
}

template <bool Parallel>
void BM_knn_graph(benchmark::State& state) {
  const PointCloud pc = points(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Graph g = Parallel ? knn_graph(pc, 8) : knn_graph_serial(pc, 8);
    benchmark::DoNotOptimize(g.num_edges());
  }
}

template <bool Parallel>
void BM_epsilon_graph(benchmark::State& state) {
  const PointCloud pc = points(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Graph g = Parallel ? epsilon_graph(pc, 0.1) : epsilon_graph_serial(pc, 0.1);
    benchmark::DoNotOptimize(g.num_edges());
  }
}

template <bool Parallel>
void BM_run_trials(benchmark::State& state) {
  const Graph g = gen_torus(16, 2);
  const NoiseModel noise{1.0, 7};
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = Parallel ? run_trials(g, UstTrees{}, {}, noise, 0.05, count)
                      : run_trials_serial(g, UstTrees{}, {}, noise, 0.05, count);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

template <bool Parallel>
void BM_ust_edge_frequencies(benchmark::State& state) {
  const Graph g = gen_torus(16, 2);
  const int samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto f = Parallel ? ust_edge_frequencies(g, samples, 3) : ust_edge_frequencies_serial(g, samples, 3);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(state.iterations() * samples);
}

}  // namespace

BENCHMARK(BM_apply_basis<false>)->Arg(32)->Arg(128)->Name("apply_basis/serial");
BENCHMARK(BM_apply_basis<true>)->Arg(32)->Arg(128)->Name("apply_basis/parallel");
BENCHMARK(BM_knn_graph<false>)->Arg(1000)->Arg(4000)->Name("knn_graph/serial");
BENCHMARK(BM_knn_graph<true>)->Arg(1000)->Arg(4000)->Name("knn_graph/parallel");
BENCHMARK(BM_epsilon_graph<false>)->Arg(1000)->Arg(4000)->Name("epsilon_graph/serial");
BENCHMARK(BM_epsilon_graph<true>)->Arg(1000)->Arg(4000)->Name("epsilon_graph/parallel");
BENCHMARK(BM_run_trials<false>)->Arg(256)->Name("run_trials/serial");
BENCHMARK(BM_run_trials<true>)->Arg(256)->Name("run_trials/parallel");
BENCHMARK(BM_ust_edge_frequencies<false>)->Arg(1000)->Name("ust_edge_frequencies/serial");
BENCHMARK(BM_ust_edge_frequencies<true>)->Arg(1000)->Name("ust_edge_frequencies/parallel");

BENCHMARK_MAIN();
