#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "gacomb/actions.hpp"
#include "gacomb/kernels.hpp"

using namespace gacomb;
namespace k = gacomb::kernels;

namespace {

struct Workload {
  ActionPtr action;
  ElementSet A;
  ElementSet G;
  PointSet Y;
  std::vector<std::vector<std::uint32_t>> family;
};

const Workload& workload() {
  static const Workload w = [] {
    Workload w;
    w.action = make_action({{"kind", "psl2"}, {"p", 23}});
    w.G = *w.action->elements();
    auto all_points = *w.action->points();
    w.A = sample_subset(w.G, 600, 1);
    w.Y = sample_subset(all_points, 12, 2);
    std::mt19937_64 rng(3);
    w.family.resize(400);
    for (auto& s : w.family)
      for (std::uint32_t v = 0; v < 2000; ++v)
        if (rng() % 4 == 0) s.push_back(v);
    return w;
  }();
  return w;
}

void set_threads(const benchmark::State& state) { k::set_threads(static_cast<int>(state.range(0))); }

void serial_pair_overlap_sum(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::pair_overlap_sum(*w.action, w.A, w.Y));
}

void parallel_pair_overlap_sum(benchmark::State& state) {
  const auto& w = workload();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::parallel::pair_overlap_sum(*w.action, w.A, w.Y));
}

void serial_overlaps(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::overlaps(*w.action, w.G, w.Y));
}

void parallel_overlaps(benchmark::State& state) {
  const auto& w = workload();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::parallel::overlaps(*w.action, w.G, w.Y));
}

void serial_quotient_counts(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::quotient_counts(*w.action, w.A));
}

void parallel_quotient_counts(benchmark::State& state) {
  const auto& w = workload();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::parallel::quotient_counts(*w.action, w.A));
}

void serial_product_set(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::product_set(*w.action, w.A, w.A));
}

void parallel_product_set(benchmark::State& state) {
  const auto& w = workload();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::parallel::product_set(*w.action, w.A, w.A));
}

void serial_intersection_matrix(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::intersection_matrix(w.family));
}

void parallel_intersection_matrix(benchmark::State& state) {
  const auto& w = workload();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::parallel::intersection_matrix(w.family));
}

void thread_args(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= k::max_threads(); t *= 2) b->Arg(t);
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(serial_pair_overlap_sum)->Unit(benchmark::kMillisecond);
BENCHMARK(parallel_pair_overlap_sum)->Apply(thread_args);
BENCHMARK(serial_overlaps)->Unit(benchmark::kMillisecond);
BENCHMARK(parallel_overlaps)->Apply(thread_args);
BENCHMARK(serial_quotient_counts)->Unit(benchmark::kMillisecond);
BENCHMARK(parallel_quotient_counts)->Apply(thread_args);
BENCHMARK(serial_product_set)->Unit(benchmark::kMillisecond);
BENCHMARK(parallel_product_set)->Apply(thread_args);
BENCHMARK(serial_intersection_matrix)->Unit(benchmark::kMillisecond);
BENCHMARK(parallel_intersection_matrix)->Apply(thread_args);

BENCHMARK_MAIN();
