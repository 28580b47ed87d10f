// Serial reference kernels against their OpenMP counterparts.
// Arg 0 is the instance size class, arg 1 the thread count (1 = serial kernel).

#include <benchmark/benchmark.h>
#include <omp.h>

#include "vertiport/generator.hpp"
#include "vertiport/mechanism.hpp"
#include "vertiport/oracle.hpp"
#include "vertiport/solver.hpp"

namespace {

using namespace vertiport;

InstanceDocument bench_instance(int size) {
  GeneratorConfig c;
  c.seed = 77 + size;
  c.vertiports = {3, 3};
  c.operators = {2 + size, 2 + size};
  c.fleet = {2, 2};
  c.max_aircraft = 4 + 2 * size;
  c.menu = {3, 3};
  c.horizon = {4 + size, 4 + size};
  c.arrival_cap = {1, 2};
  c.departure_cap = {1, 2};
  c.parking_cap = {2, 4};
  return generate(c);
}

void apply_threads(benchmark::State& state, SolveOptions& options) {
  options.threads = static_cast<int>(state.range(1));
  omp_set_num_threads(options.threads);
}

void BM_Enumerate(benchmark::State& state) {
  const auto doc = bench_instance(static_cast<int>(state.range(0)));
  const auto graph = build_graph(doc.instance, *doc.bids);
  SolveOptions options;
  apply_threads(state, options);
  for (auto _ : state) {
    auto r = options.threads > 1 ? solve_enumerate_parallel(graph, options)
                                 : solve_enumerate_serial(graph, options);
    benchmark::DoNotOptimize(r.objective);
  }
  state.counters["deltas"] = static_cast<double>(enumerate_deltas(graph).size());
}

void BM_BranchAndBound(benchmark::State& state) {
  const auto doc = bench_instance(static_cast<int>(state.range(0)));
  const auto graph = build_graph(doc.instance, *doc.bids);
  SolveOptions options;
  apply_threads(state, options);
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    auto r = options.threads > 1 ? solve_branch_and_bound_parallel(graph, options)
                                 : solve_branch_and_bound_serial(graph, options);
    nodes = r.stats.nodes_explored;
    benchmark::DoNotOptimize(r.objective);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}

void BM_Oracle(benchmark::State& state) {
  const auto doc = bench_instance(static_cast<int>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  omp_set_num_threads(threads);
  EnumerationBudget budget;
  budget.max_allocations = 100'000'000;
  for (auto _ : state) {
    auto r = threads > 1 ? oracle_optimal_parallel(doc.instance, *doc.bids, threads, budget)
                         : oracle_optimal(doc.instance, *doc.bids, budget);
    benchmark::DoNotOptimize(r.welfare);
  }
}

void BM_Auction(benchmark::State& state) {
  const auto doc = bench_instance(static_cast<int>(state.range(0)));
  AuctionOptions options;
  options.payment_threads = static_cast<int>(state.range(1));
  omp_set_num_threads(options.payment_threads);
  for (auto _ : state) {
    auto r = run_auction(doc.instance, *doc.bids, options);
    benchmark::DoNotOptimize(r.cleared_welfare);
  }
}

void sizes_and_threads(benchmark::internal::Benchmark* b) {
  const int max_threads = omp_get_num_procs();
  for (int size = 0; size <= 1; ++size) {
    b->Args({size, 1});
    for (int t = 2; t <= max_threads; t *= 2) b->Args({size, t});
    if (max_threads < 2) b->Args({size, 2});
  }
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Enumerate)->Apply(sizes_and_threads);
BENCHMARK(BM_BranchAndBound)->Apply(sizes_and_threads);
BENCHMARK(BM_Oracle)->Apply(sizes_and_threads);
BENCHMARK(BM_Auction)->Apply(sizes_and_threads);

}  // namespace

BENCHMARK_MAIN();
