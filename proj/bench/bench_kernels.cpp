// Serial reference against OpenMP kernels on the bundled case study.

#include <filesystem>

#include <benchmark/benchmark.h>

#include "mcda/pipeline.hpp"

using namespace mcda;

namespace {

const Problem& case_study() {
  static const Problem p = load_problem(std::filesystem::path(MCDA_DATA_DIR) / "case_study" / "problem.json");
  return p;
}

const SampleSet& samples() {
  static const SampleSet s = [] {
    SamplerConfig cfg;
    cfg.sample_count = 5000;
    return har_sample(problem_system(case_study()), cfg);
  }();
  return s;
}

void indices_serial(benchmark::State& state) {
  const auto& p = case_study();
  const auto nodes = analysis_nodes(p.hierarchy);
  for (auto _ : state) benchmark::DoNotOptimize(compute_indices_serial(samples(), p.hierarchy, p.table, nodes));
}

void indices_parallel(benchmark::State& state) {
  const auto& p = case_study();
  const auto nodes = analysis_nodes(p.hierarchy);
  for (auto _ : state) benchmark::DoNotOptimize(compute_indices(samples(), p.hierarchy, p.table, nodes));
}

void nap(benchmark::State& state, bool parallel) {
  const auto& p = case_study();
  const auto sys = problem_system(p);
  const NodeId node = p.hierarchy.resolve("Ec");
  NapOptions options;
  options.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(nap_relation(sys, p.hierarchy, p.table, node, options));
}

void nap_serial(benchmark::State& state) { nap(state, false); }
void nap_parallel(benchmark::State& state) { nap(state, true); }

}  // namespace

BENCHMARK(indices_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(indices_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(nap_serial)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(nap_parallel)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
