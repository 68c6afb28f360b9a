#include <random>

#include <gtest/gtest.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/evaluation.hpp"
#include "harpioneer/model.hpp"
#include "harpioneer/split.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace harpioneer;
using L = ActivityLabel;

namespace {

struct Blobs {
  FeatureMatrix x;
  std::vector<ActivityLabel> y;
};

// Two unit-variance Gaussian blobs 10 sigma apart along both axes: the
// Bayes error is below 1e-12, so any sane forest separates them.
Blobs blobs(std::size_t n, std::uint64_t seed, std::size_t every = 2) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Blobs b;
  b.x.columns = {"f0", "f1"};
  for (std::size_t i = 0; i < n; ++i) {
    const bool second = i % every == every - 1;
    const double c = second ? 10.0 : 0.0;
    b.x.data.push_back(c + noise(gen));
    b.x.data.push_back(c + noise(gen));
    b.y.push_back(second ? L::Walk : L::Sit);
  }
  b.x.rows = n;
  return b;
}

double accuracy(const std::vector<L>& p, const std::vector<L>& t) { return evaluate(p, t).accuracy; }

std::shared_ptr<const Recording> run_named(const std::string& subject, const std::string& run) {
  auto r = std::make_shared<Recording>();
  r->provenance = {subject, run, subject + "-" + run + ".dat"};
  return r;
}

}  // namespace

TEST(Evaluate, PerfectAndSwapped) {
  const std::vector<L> t{L::Stand, L::Walk, L::Sit};
  const auto r = evaluate(t, t);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.macro_f1, 1.0);
  const auto s = evaluate(std::vector<L>{L::Walk, L::Stand}, std::vector<L>{L::Stand, L::Walk});
  EXPECT_EQ(s.accuracy, 0.0);
  EXPECT_EQ(s.per_class_f1[label_index(L::Stand)], 0.0);
  EXPECT_EQ(s.per_class_f1[label_index(L::Walk)], 0.0);
  EXPECT_EQ(s.macro_f1, 0.0);
  EXPECT_THROW(evaluate(std::vector<L>{L::Stand}, std::vector<L>{}), Error);
  EXPECT_THROW(evaluate(std::vector<L>{}, std::vector<L>{}), Error);
}

// Hand computation:
//   truth  S S S S Si Si Si W W Ly
//   pred   S S Si W Si Si S  W W Ly
// Stand: TP 2, FP 1, FN 2 -> P 2/3, R 1/2, F1 4/7
// Sit:   TP 2, FP 1, FN 1 -> P 2/3, R 2/3, F1 2/3
// Walk:  TP 2, FP 1, FN 0 -> P 2/3, R 1,   F1 4/5
// Lie:   TP 1                              F1 1
// Others absent. accuracy 7/10; macro over 4 present classes.
TEST(Evaluate, HandComputedTenRows) {
  const std::vector<L> truth{L::Stand, L::Stand, L::Stand, L::Stand, L::Sit, L::Sit, L::Sit, L::Walk, L::Walk, L::Lie};
  const std::vector<L> pred{L::Stand, L::Stand, L::Sit, L::Walk, L::Sit, L::Sit, L::Stand, L::Walk, L::Walk, L::Lie};
  const auto r = evaluate(pred, truth);
  const ConfusionMatrix expected{{{2, 1, 1, 0, 0}, {1, 2, 0, 0, 0}, {0, 0, 2, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 0}}};
  EXPECT_EQ(r.confusion, expected);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.7);
  EXPECT_NEAR(r.per_class_f1[0], 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.per_class_f1[1], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.per_class_f1[2], 0.8, 1e-15);
  EXPECT_NEAR(r.per_class_f1[3], 1.0, 1e-15);
  EXPECT_FALSE(r.class_present[4]);
  EXPECT_NEAR(r.macro_f1, (4.0 / 7.0 + 2.0 / 3.0 + 0.8 + 1.0) / 4.0, 1e-15);
  EXPECT_EQ(r.n_windows, 10u);
  EXPECT_EQ(report_from_confusion(r.confusion), r);
}

TEST(Evaluate, HammingAndRowSumProperties) {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> cls(0, 4);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 97;
    std::vector<L> p(n), t(n);
    std::array<std::uint64_t, 5> truth_counts{};
    std::size_t hamming = 0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<L>(cls(gen));
      t[i] = static_cast<L>(cls(gen));
      hamming += p[i] != t[i];
      ++truth_counts[label_index(t[i])];
    }
    const auto r = evaluate(p, t);
    ASSERT_NEAR(r.accuracy, 1.0 - static_cast<double>(hamming) / static_cast<double>(n), 1e-15);
    std::uint64_t total = 0;
    for (std::size_t row = 0; row < 5; ++row) {
      std::uint64_t sum = 0;
      for (auto v : r.confusion[row]) sum += v;
      ASSERT_EQ(sum, truth_counts[row]);
      total += sum;
    }
    ASSERT_EQ(total, r.n_windows);
    ASSERT_GE(r.macro_f1, 0.0);
    ASSERT_LE(r.macro_f1, 1.0);
  }
}

TEST(Forest, RejectsDegenerateInputs) {
  auto b = blobs(40, 1);
  std::vector<L> single(b.y.size(), L::Stand);
  EXPECT_THROW(TrainedModel::train(b.x, single, {}, 1), TrainingError);
  auto small = blobs(8, 1);
  EXPECT_THROW(TrainedModel::train(small.x, small.y, {}, 1), TrainingError);
  b.x.data[3] = std::nan("");
  EXPECT_THROW(TrainedModel::train(b.x, b.y, {}, 1), TrainingError);
}

TEST(Forest, SeparatesBlobs) {
  const auto train = blobs(200, 2);
  const auto test = blobs(200, 3);
  const auto model = TrainedModel::train(train.x, train.y, {}, 99);
  EXPECT_GE(accuracy(model.predict(train.x), train.y), 0.99);
  EXPECT_GE(accuracy(model.predict(test.x), test.y), 0.95);
}

TEST(Forest, DeterministicForSeed) {
  const auto train = blobs(120, 4);
  auto noisy = train;
  std::mt19937_64 gen(1);
  for (auto& v : noisy.x.data) v += std::normal_distribution<double>(0.0, 4.0)(gen);
  const auto test = blobs(100, 5);
  const auto a = TrainedModel::train(noisy.x, noisy.y, {}, 7);
  const auto b = TrainedModel::train(noisy.x, noisy.y, {}, 7);
  EXPECT_EQ(a.predict(test.x), b.predict(test.x));
  ASSERT_EQ(a.trees().size(), b.trees().size());
  for (std::size_t t = 0; t < a.trees().size(); ++t) {
    ASSERT_EQ(a.trees()[t].nodes.size(), b.trees()[t].nodes.size());
  }
}

TEST(Forest, SingleUnlimitedTreeMemorizes) {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> cls(0, 4);
  std::normal_distribution<double> v(0.0, 1.0);
  FeatureMatrix x;
  x.columns = {"a", "b", "c"};
  std::vector<L> y;
  for (int i = 0; i < 150; ++i) {
    for (int c = 0; c < 3; ++c) x.data.push_back(v(gen));
    y.push_back(static_cast<L>(cls(gen)));
  }
  x.rows = 150;
  ForestParams p;
  p.n_trees = 1;
  p.max_depth = 0;
  p.bootstrap = false;
  p.max_features = 3;
  const auto model = TrainedModel::train(x, y, p, 3);
  EXPECT_EQ(model.predict(x), y);
}

TEST(Forest, VoteMatchesIndependentTally) {
  const auto train = blobs(200, 6);
  auto noisy = train;
  std::mt19937_64 gen(2);
  for (auto& v : noisy.x.data) v += std::normal_distribution<double>(0.0, 6.0)(gen);
  ForestParams p;
  p.n_trees = 24;
  const auto model = TrainedModel::train(noisy.x, noisy.y, p, 11);
  for (std::size_t r = 0; r < noisy.x.rows; ++r) {
    const auto row = noisy.x.row(r);
    std::vector<std::size_t> votes;
    for (const auto& tree : model.trees()) votes.push_back(label_index(tree.predict(row)));
    ASSERT_EQ(label_index(model.predict_row(row)), oracle::tally(votes, kNumClasses));
    const auto per_tree = model.tree_predictions(row);
    ASSERT_EQ(per_tree.size(), votes.size());
  }
}

TEST(Forest, SchemaMismatchListsColumns) {
  const auto train = blobs(50, 7);
  const auto model = TrainedModel::train(train.x, train.y, {}, 1);
  auto renamed = train.x;
  renamed.columns[1] = "f1_renamed";
  try {
    model.predict(renamed);
    FAIL();
  } catch (const SchemaMismatchError& e) {
    EXPECT_EQ(e.missing(), std::vector<std::string>{"f1"});
    EXPECT_EQ(e.extra(), std::vector<std::string>{"f1_renamed"});
  }
}

TEST(Forest, SaveLoadRoundTrip) {
  testutil::TempDir dir("model");
  const auto train = blobs(80, 8);
  const auto model = TrainedModel::train(train.x, train.y, {}, 5);
  model.save(dir / "m.json");
  const auto loaded = TrainedModel::load(dir / "m.json");
  EXPECT_EQ(loaded.schema_fingerprint(), model.schema_fingerprint());
  EXPECT_EQ(loaded.seed(), 5u);
  EXPECT_EQ(loaded.params(), model.params());
  EXPECT_EQ(loaded.predict(train.x), model.predict(train.x));
  testutil::write_text(dir / "bad.json", "{\"format\":\"nope\"}");
  EXPECT_THROW(TrainedModel::load(dir / "bad.json"), ConfigError);
}

TEST(Forest, BalancedBootstrapStillLearns) {
  const auto train = blobs(200, 9, 10);
  ForestParams p;
  p.balance_classes = true;
  const auto model = TrainedModel::train(train.x, train.y, p, 4);
  EXPECT_GE(accuracy(model.predict(train.x), train.y), 0.99);
}

TEST(Split, DefaultProtocol) {
  std::vector<std::shared_ptr<const Recording>> recs;
  for (const char* run : {"ADL1", "ADL2", "ADL3", "ADL4", "ADL5", "Drill"}) recs.push_back(run_named("S1", run));
  const auto s = split_train_test(recs);
  EXPECT_EQ(s.train.size(), 4u);
  EXPECT_EQ(s.test.size(), 2u);
  EXPECT_EQ(s.test[0]->provenance.run, "ADL4");
}

TEST(Split, EmptySidesAreErrors) {
  std::vector<std::shared_ptr<const Recording>> only4{run_named("S1", "ADL4")};
  EXPECT_THROW(split_train_test(only4), DatasetError);
  std::vector<std::shared_ptr<const Recording>> recs{run_named("S1", "ADL1"), run_named("S1", "ADL4")};
  SplitProtocol p;
  p.train_runs = {"ADL*"};
  EXPECT_THROW(split_train_test(recs, p), DatasetError);
}

TEST(Split, GlobMatch) {
  EXPECT_TRUE(glob_match("ADL*", "ADL3"));
  EXPECT_TRUE(glob_match("S?", "S4"));
  EXPECT_FALSE(glob_match("S?", "S10"));
  EXPECT_TRUE(glob_match("*", ""));
}
