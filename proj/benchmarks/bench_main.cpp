#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "conrel/analysis.hpp"
#include "conrel/generator.hpp"
#include "conrel/gradient.hpp"
#include "conrel/pairwise.hpp"
#include "conrel/problem.hpp"

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// O(N^2) pair enumeration dominates the analysis.
void BM_CountEvidence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_values(n, 1);
  const auto b = random_values(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conrel::count_evidence(a, b));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountEvidence)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oNSquared);

void BM_CrossingCount(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_values(n, 3);
  const auto b = random_values(n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conrel::crossing_count(a, b));
  }
}
BENCHMARK(BM_CrossingCount)->Arg(200)->Arg(1000);

void BM_SampleLhs(benchmark::State& state) {
  const conrel::Problem problem = conrel::paper_merged();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(conrel::sample(problem, n, 42));
  }
}
BENCHMARK(BM_SampleLhs)->Arg(200)->Arg(2000);

void BM_GradientSymbolic(benchmark::State& state) {
  const conrel::Problem problem = conrel::paper_merged();
  const auto samples = conrel::sample(problem, 200, 42);
  const conrel::GradientTable table(problem);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conrel::gradient_relationship(table, 0, 1, samples));
  }
}
BENCHMARK(BM_GradientSymbolic);

void BM_GradientCentralDifference(benchmark::State& state) {
  const conrel::Problem problem = conrel::paper_merged();
  const auto samples = conrel::sample(problem, 200, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conrel::gradient_relationship(problem, 0, 1, samples,
                                                           conrel::GradientMode::CentralDifference));
  }
}
BENCHMARK(BM_GradientCentralDifference);

void BM_AnalyzeAffine(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto planted = conrel::generate_affine(6, m, 7, conrel::AffinePlan{});
  conrel::AnalysisOptions o;
  o.seed = 42;
  for (auto _ : state) {
    benchmark::DoNotOptimize(conrel::analyze(planted.problem, o));
  }
}
BENCHMARK(BM_AnalyzeAffine)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
