#include "harpioneer/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/hash.hpp"
#include "harpioneer/paths.hpp"
#include "harpioneer/random.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace harpioneer {

using nlohmann::json;

std::string schema_fingerprint(std::span<const std::string> columns) {
  std::string joined;
  for (const auto& c : columns) {
    joined += c;
    joined += '\n';
  }
  return fingerprint_hex(joined);
}

namespace {

using ClassCounts = std::array<std::size_t, kNumClasses>;

ActivityLabel majority(const ClassCounts& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return kAllLabels[best];
}

double gini_sum(const ClassCounts& counts, std::size_t n) {
  // n * gini = n - sum(c^2)/n
  if (n == 0) return 0.0;
  double sq = 0.0;
  for (std::size_t c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
  return static_cast<double>(n) - sq / static_cast<double>(n);
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::span<const ActivityLabel> y, const ForestParams& params,
              std::size_t max_features, Rng& rng)
      : x_(x), y_(y), params_(params), max_features_(max_features), rng_(rng) {
    features_.resize(x.cols());
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree build(std::vector<std::size_t> samples) {
    DecisionTree tree;
    grow(tree, samples, 0);
    return tree;
  }

 private:
  int grow(DecisionTree& tree, std::vector<std::size_t>& samples, int depth) {
    ClassCounts counts{};
    for (std::size_t s : samples) ++counts[label_index(y_[s])];
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority(counts)});

    const bool pure = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) <= 1;
    const bool depth_limited = params_.max_depth > 0 && depth >= params_.max_depth;
    if (pure || depth_limited || samples.size() < static_cast<std::size_t>(params_.min_samples_split)) {
      return index;
    }

    const Split split = best_split(samples, counts);
    if (split.feature < 0) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t s : samples) {
      (value(s, split.feature) <= split.threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    const int l = grow(tree, left, depth + 1);
    const int r = grow(tree, right, depth + 1);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return index;
  }

  double value(std::size_t row, int feature) const {
    return x_.data[row * x_.cols() + static_cast<std::size_t>(feature)];
  }

  Split best_split(const std::vector<std::size_t>& samples, const ClassCounts& parent) {
    Split best;
    best.impurity = INFINITY;
    // Partial Fisher-Yates: draw candidates one at a time; keep drawing past
    // max_features only while no valid split has been found.
    const std::size_t f_count = features_.size();
    for (std::size_t drawn = 0; drawn < f_count; ++drawn) {
      if (drawn >= max_features_ && best.feature >= 0) break;
      const std::size_t pick = drawn + static_cast<std::size_t>(rng_.below(f_count - drawn));
      std::swap(features_[drawn], features_[pick]);
      evaluate_feature(static_cast<int>(features_[drawn]), samples, parent, best);
    }
    return best;
  }

  void evaluate_feature(int feature, const std::vector<std::size_t>& samples, const ClassCounts& parent,
                        Split& best) {
    sorted_.clear();
    for (std::size_t s : samples) sorted_.emplace_back(value(s, feature), label_index(y_[s]));
    std::sort(sorted_.begin(), sorted_.end());
    if (sorted_.front().first == sorted_.back().first) return;

    ClassCounts left{};
    ClassCounts right = parent;
    const std::size_t n = sorted_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left[sorted_[i].second];
      --right[sorted_[i].second];
      const double a = sorted_[i].first;
      const double b = sorted_[i + 1].first;
      if (a == b) continue;
      const double impurity = gini_sum(left, i + 1) + gini_sum(right, n - i - 1);
      if (impurity < best.impurity) {
        double threshold = a + (b - a) / 2.0;
        if (!(threshold < b)) threshold = a;
        best = Split{feature, threshold, impurity};
      }
    }
  }

  const FeatureMatrix& x_;
  std::span<const ActivityLabel> y_;
  const ForestParams& params_;
  std::size_t max_features_;
  Rng& rng_;
  std::vector<std::size_t> features_;
  std::vector<std::pair<double, std::size_t>> sorted_;
};

std::vector<std::size_t> draw_samples(std::span<const ActivityLabel> y, const ForestParams& params,
                                      Rng& rng) {
  const std::size_t n = y.size();
  std::vector<std::size_t> samples;
  if (!params.bootstrap) {
    samples.resize(n);
    std::iota(samples.begin(), samples.end(), 0);
    return samples;
  }
  if (!params.balance_classes) {
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) samples.push_back(static_cast<std::size_t>(rng.below(n)));
    return samples;
  }
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[label_index(y[i])].push_back(i);
  const auto present = static_cast<std::size_t>(
      std::count_if(by_class.begin(), by_class.end(), [](const auto& v) { return !v.empty(); }));
  const std::size_t per_class = std::max<std::size_t>(1, n / present);
  for (const auto& rows : by_class) {
    if (rows.empty()) continue;
    for (std::size_t i = 0; i < per_class; ++i) samples.push_back(rows[rng.below(rows.size())]);
  }
  return samples;
}

}  // namespace

ActivityLabel DecisionTree::predict(std::span<const double> row) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& node = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                : node.right);
  }
  return nodes[i].label;
}

TrainedModel TrainedModel::train(const FeatureMatrix& features, std::span<const ActivityLabel> labels,
                                 const ForestParams& params, std::uint64_t seed) {
  if (features.rows < 10) {
    throw TrainingError(fmt::format("need at least 10 training rows, got {}", features.rows));
  }
  if (labels.size() != features.rows) {
    throw TrainingError(fmt::format("{} labels for {} rows", labels.size(), features.rows));
  }
  if (features.cols() == 0) throw TrainingError("feature matrix has no columns");
  if (std::set<ActivityLabel>(labels.begin(), labels.end()).size() < 2) {
    throw TrainingError("training labels contain fewer than 2 distinct classes");
  }
  for (std::size_t i = 0; i < features.data.size(); ++i) {
    if (!std::isfinite(features.data[i])) {
      throw TrainingError(fmt::format("non-finite value in row {}, column '{}'", i / features.cols(),
                                      features.columns[i % features.cols()]));
    }
  }
  if (params.n_trees < 1) throw TrainingError("n_trees must be at least 1");
  if (params.max_depth < 0 || params.max_features < 0 || params.min_samples_split < 2) {
    throw TrainingError("invalid forest hyperparameters");
  }

  TrainedModel model;
  model.columns_ = features.columns;
  model.fingerprint_ = harpioneer::schema_fingerprint(model.columns_);
  model.params_ = params;
  model.seed_ = seed;
  model.trees_.resize(static_cast<std::size_t>(params.n_trees));

  const std::size_t max_features =
      params.max_features > 0
          ? std::min<std::size_t>(static_cast<std::size_t>(params.max_features), features.cols())
          : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(features.cols()))));

  detail::parallel_for(model.trees_.size(), [&](std::size_t t) {
    Rng rng(mix_seed(seed) ^ mix_seed(static_cast<std::uint64_t>(t) + 1));
    auto samples = draw_samples(labels, params, rng);
    TreeBuilder builder(features, labels, params, max_features, rng);
    model.trees_[t] = builder.build(std::move(samples));
  });
  return model;
}

void TrainedModel::check_schema(std::span<const std::string> columns) const {
  if (harpioneer::schema_fingerprint(columns) == fingerprint_) return;
  const std::set<std::string> have(columns.begin(), columns.end());
  const std::set<std::string> want(columns_.begin(), columns_.end());
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  std::set_difference(want.begin(), want.end(), have.begin(), have.end(), std::back_inserter(missing));
  std::set_difference(have.begin(), have.end(), want.begin(), want.end(), std::back_inserter(extra));
  throw SchemaMismatchError(std::move(missing), std::move(extra));
}

std::vector<ActivityLabel> TrainedModel::predict(const FeatureMatrix& features) const {
  check_schema(features.columns);
  std::vector<ActivityLabel> out(features.rows);
  detail::parallel_for(features.rows, [&](std::size_t r) { out[r] = predict_row(features.row(r)); });
  return out;
}

ActivityLabel TrainedModel::predict_row(std::span<const double> row) const {
  if (row.size() != columns_.size()) {
    throw Error(fmt::format("row has {} values, model expects {}", row.size(), columns_.size()));
  }
  ClassCounts votes{};
  for (const auto& tree : trees_) ++votes[label_index(tree.predict(row))];
  return majority(votes);
}

std::vector<ActivityLabel> TrainedModel::tree_predictions(std::span<const double> row) const {
  std::vector<ActivityLabel> out;
  out.reserve(trees_.size());
  for (const auto& tree : trees_) out.push_back(tree.predict(row));
  return out;
}

void TrainedModel::save(const std::filesystem::path& path) const {
  json doc;
  doc["format"] = "harpioneer-forest";
  doc["version"] = 1;
  doc["columns"] = columns_;
  doc["schema_fingerprint"] = fingerprint_;
  doc["seed"] = seed_;
  doc["params"] = {{"n_trees", params_.n_trees},
                   {"max_depth", params_.max_depth},
                   {"max_features", params_.max_features},
                   {"min_samples_split", params_.min_samples_split},
                   {"bootstrap", params_.bootstrap},
                   {"balance_classes", params_.balance_classes}};
  json trees = json::array();
  for (const auto& tree : trees_) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, label_name(n.label)});
    }
    trees.push_back(std::move(nodes));
  }
  doc["trees"] = std::move(trees);
  write_file_atomic(path, doc.dump());
}

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
  try {
    const json doc = json::parse(read_file(path));
    if (doc.at("format") != "harpioneer-forest" || doc.at("version") != 1) {
      throw ConfigError(fmt::format("{}: not a version-1 forest file", path.string()));
    }
    TrainedModel m;
    m.columns_ = doc.at("columns").get<std::vector<std::string>>();
    m.fingerprint_ = doc.at("schema_fingerprint").get<std::string>();
    if (m.fingerprint_ != harpioneer::schema_fingerprint(m.columns_)) {
      throw ConfigError(fmt::format("{}: schema fingerprint does not match columns", path.string()));
    }
    m.seed_ = doc.at("seed").get<std::uint64_t>();
    const auto& p = doc.at("params");
    m.params_.n_trees = p.at("n_trees");
    m.params_.max_depth = p.at("max_depth");
    m.params_.max_features = p.at("max_features");
    m.params_.min_samples_split = p.at("min_samples_split");
    m.params_.bootstrap = p.at("bootstrap");
    m.params_.balance_classes = p.at("balance_classes");
    for (const auto& t : doc.at("trees")) {
      DecisionTree tree;
      for (const auto& n : t) {
        const auto label = parse_label(n.at(4).get<std::string>());
        if (!label) throw ConfigError(fmt::format("{}: bad leaf label", path.string()));
        tree.nodes.push_back(TreeNode{n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                                      n.at(3).get<int>(), *label});
      }
      m.trees_.push_back(std::move(tree));
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace harpioneer
