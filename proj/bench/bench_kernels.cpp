// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>

#include <laakso/ball.hpp>
#include <laakso/kernels.hpp>
#include <laakso/walk.hpp>

using namespace laakso;

namespace {

const LaaksoGraph& classical() {
  static const LaaksoGraph g(BranchingFunction::constant_branching(2), GluingFunction::constant_gluing(2));
  return g;
}

const BallGraph& ball(int r) {
  static std::map<int, BallGraph> cache;
  auto it = cache.find(r);
  if (it == cache.end()) it = cache.emplace(r, bfs_ball(classical(), LaaksoGraph::base(), r)).first;
  return it->second;
}

std::vector<double> uniform(std::int64_t n) { return std::vector<double>(static_cast<std::size_t>(n), 1.0 / n); }

void BM_StepPull(benchmark::State& st) {
  const auto& g = ball(static_cast<int>(st.range(0)));
  const auto inv = kernels::inverse_degrees(g);
  const auto in = uniform(g.size());
  std::vector<double> out;
  const int workers = st.range(1) == 0 ? omp_get_max_threads() : static_cast<int>(st.range(1));
  for (auto _ : st) {
    kernels::step_pull(g, inv, in, out, workers);
    benchmark::DoNotOptimize(out.data());
  }
  st.counters["vertices"] = static_cast<double>(g.size());
}

void BM_StepPushSerial(benchmark::State& st) {
  const auto& g = ball(static_cast<int>(st.range(0)));
  const auto inv = kernels::inverse_degrees(g);
  const auto in = uniform(g.size());
  std::vector<double> out;
  for (auto _ : st) {
    kernels::step_push_serial(g, inv, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.counters["vertices"] = static_cast<double>(g.size());
}

void BM_ExitCG(benchmark::State& st) {
  const int r = static_cast<int>(st.range(0));
  const auto& g = ball(r);
  const int workers = st.range(1) == 0 ? omp_get_max_threads() : static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::solve_exit_cg(g, r, 1e-10, 1000000, workers));
}

void BM_ExitSOR(benchmark::State& st) {
  const int r = static_cast<int>(st.range(0));
  const auto& g = ball(r);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::solve_exit_sor(g, r, 1e-10, 10000000, 1.5));
}

void BM_LumpedPull(benchmark::State& st) {
  const auto w = kernels::make_lumped_walk(classical(), static_cast<int>(st.range(0)), {});
  const std::vector<double> in(w.tree_ball.size() * w.levels, 1.0);
  std::vector<double> out;
  const int workers = st.range(1) == 0 ? omp_get_max_threads() : static_cast<int>(st.range(1));
  for (auto _ : st) {
    kernels::lumped_step_pull(w, in, out, workers);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_LumpedPushSerial(benchmark::State& st) {
  const auto w = kernels::make_lumped_walk(classical(), static_cast<int>(st.range(0)), {});
  const std::vector<double> in(w.tree_ball.size() * w.levels, 1.0);
  std::vector<double> out;
  for (auto _ : st) {
    kernels::lumped_step_push_serial(w, in, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_MonteCarlo(benchmark::State& st) {
  WalkOptions opts;
  opts.workers = st.range(0) == 0 ? omp_get_max_threads() : static_cast<int>(st.range(0));
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        simulate_exit_time(classical(), LaaksoGraph::base(), 16, 2000, RandomStream(1, 0), opts));
  }
}

}  // namespace

// Second argument: worker count, 0 for all available threads.
BENCHMARK(BM_StepPull)->Args({256, 1})->Args({256, 0})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StepPushSerial)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExitCG)->Args({64, 1})->Args({64, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExitSOR)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LumpedPull)->Args({2048, 1})->Args({2048, 0})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LumpedPushSerial)->Arg(2048)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
