#include <random>

#include <benchmark/benchmark.h>

#include "harpioneer/features.hpp"
#include "harpioneer/windowing.hpp"

using namespace harpioneer;
namespace F = harpioneer::features;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = d(gen);
  return x;
}

std::shared_ptr<const Recording> recording(std::size_t locations, std::size_t n) {
  auto rec = std::make_shared<Recording>();
  std::uint64_t seed = 1;
  for (std::size_t l = 0; l < locations; ++l) {
    LocationSeries loc{"L" + std::to_string(l), {}};
    for (const char* m : {"acc", "gyro", "mag"}) {
      GroupSeries g{m, {}};
      for (auto& axis : g.axes) axis = noise(n, seed++);
      loc.groups.push_back(std::move(g));
    }
    rec->locations.push_back(std::move(loc));
  }
  rec->labels.assign(n, ActivityLabel::Walk);
  rec->timestamps_ms.resize(n);
  return rec;
}

void BM_BasicStats(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(F::basic_stats(x));
}
BENCHMARK(BM_BasicStats)->Arg(150)->Arg(151);

void BM_Entropy(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(F::entropy(x));
}
BENCHMARK(BM_Entropy)->Arg(150);

void BM_FftCoefficients(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(F::fft_coefficients(x, 5));
}
BENCHMARK(BM_FftCoefficients)->Arg(16)->Arg(150)->Arg(151);

void BM_PeakFrequency(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(F::peak_frequency(x, 30.0));
}
BENCHMARK(BM_PeakFrequency)->Arg(150)->Arg(151);

void BM_FeaturizeWindows(benchmark::State& state) {
  const auto rec = recording(static_cast<std::size_t>(state.range(0)), 30 * 600);
  const auto windows = segment(rec);
  const auto specs = state.range(1) ? full_feature_specs() : baseline_feature_specs();
  for (auto _ : state) benchmark::DoNotOptimize(featurize_windows(windows, specs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(windows.size()));
}
BENCHMARK(BM_FeaturizeWindows)->Args({4, 0})->Args({4, 1})->Args({18, 1})->Unit(benchmark::kMillisecond);

}  // namespace
