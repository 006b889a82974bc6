// Serial reference versus the OpenMP trial runner on the same instance.
// Thread count for the parallel runs follows ERT_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <string>

#include "ert/harness.hpp"

using namespace ert;
using nlohmann::json;

namespace {

ExperimentConfig make_config(int which, std::uint64_t trials) {
  json j;
  switch (which) {
    case 0:
      j = {{"tester", "monotone-line"}, {"eps", 0.1}, {"alpha", 0.3},
           {"instance", {{"n", 4096}, {"member", true}}}};
      break;
    case 1:
      j = {{"tester", "convex-line"}, {"eps", 0.1}, {"alpha", 0.3},
           {"instance", {{"n", 1024}, {"member", true}}}};
      break;
    default:
      j = {{"tester", "monotone-grid"}, {"eps", 0.2},
           {"instance", {{"n", 16}, {"d", 2}, {"member", true}}}};
      break;
  }
  j["trials"] = trials;
  j["seed"] = 5;
  return parse_experiment(j);
}

const char* kNames[] = {"monotone-line", "convex-line", "monotone-grid"};

void BM_Serial(benchmark::State& state) {
  const auto cfg = make_config(static_cast<int>(state.range(0)),
                               static_cast<std::uint64_t>(state.range(1)));
  const ErasedFunction f = load_instance(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_experiment_serial(cfg, f));
  }
  state.SetLabel(kNames[state.range(0)]);
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_Parallel(benchmark::State& state) {
  const auto cfg = make_config(static_cast<int>(state.range(0)),
                               static_cast<std::uint64_t>(state.range(1)));
  const ErasedFunction f = load_instance(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_experiment(cfg, f));
  }
  state.SetLabel(std::string(kNames[state.range(0)]) + " threads=" +
                 std::to_string(configured_threads()));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void Args(benchmark::internal::Benchmark* b) {
  for (int which = 0; which < 3; ++which) b->Args({which, 2000});
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_Serial)->Apply(Args);
BENCHMARK(BM_Parallel)->Apply(Args);

BENCHMARK_MAIN();
