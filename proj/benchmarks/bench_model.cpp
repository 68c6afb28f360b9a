#include <random>

#include <benchmark/benchmark.h>

#include "harpioneer/model.hpp"

using namespace harpioneer;

namespace {

struct Data {
  FeatureMatrix x;
  std::vector<ActivityLabel> y;
};

// Five Gaussian classes with overlapping means.
Data make_data(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  Data data;
  for (std::size_t c = 0; c < cols; ++c) data.x.columns.push_back("f" + std::to_string(c));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto label = static_cast<std::size_t>(r % kNumClasses);
    for (std::size_t c = 0; c < cols; ++c) data.x.data.push_back(d(gen) + (c % kNumClasses == label ? 1.5 : 0.0));
    data.y.push_back(kAllLabels[label]);
  }
  data.x.rows = rows;
  return data;
}

void BM_ForestTrain(benchmark::State& state) {
  const auto data = make_data(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  ForestParams p;
  p.n_trees = 50;
  for (auto _ : state) benchmark::DoNotOptimize(TrainedModel::train(data.x, data.y, p, 7));
}
BENCHMARK(BM_ForestTrain)->Args({1000, 60})->Args({1000, 540})->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  const auto train = make_data(1000, 60, 2);
  const auto test = make_data(static_cast<std::size_t>(state.range(0)), 60, 3);
  const auto model = TrainedModel::train(train.x, train.y, {}, 7);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(test.x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForestPredict)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
