#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "harpioneer/features.hpp"
#include "harpioneer/labels.hpp"

namespace harpioneer {

struct ForestParams {
  int n_trees = 100;
  int max_depth = 12;         // 0 = unlimited
  int max_features = 0;       // candidate features per split; 0 = sqrt(feature count)
  int min_samples_split = 2;
  bool bootstrap = true;
  /// Bootstrap draws an equal number of rows from every class present.
  bool balance_classes = false;

  bool operator==(const ForestParams&) const = default;
};

/// Stable hash of an ordered column list.
std::string schema_fingerprint(std::span<const std::string> columns);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  ActivityLabel label = ActivityLabel::Others;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  ActivityLabel predict(std::span<const double> row) const;
};

/// Random forest of Gini decision trees. Tree t draws from its own RNG stream
/// derived from (seed, t), so fitting order never changes the result.
class TrainedModel {
 public:
  static TrainedModel train(const FeatureMatrix& features, std::span<const ActivityLabel> labels,
                            const ForestParams& params, std::uint64_t seed);

  /// Throws SchemaMismatchError listing missing/extra columns.
  std::vector<ActivityLabel> predict(const FeatureMatrix& features) const;
  /// Majority vote over trees; vote ties go to the earlier class.
  ActivityLabel predict_row(std::span<const double> row) const;
  std::vector<ActivityLabel> tree_predictions(std::span<const double> row) const;

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::string& schema_fingerprint() const noexcept { return fingerprint_; }
  const ForestParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

  void save(const std::filesystem::path& path) const;
  static TrainedModel load(const std::filesystem::path& path);

 private:
  void check_schema(std::span<const std::string> columns) const;

  std::vector<std::string> columns_;
  std::string fingerprint_;
  ForestParams params_;
  std::uint64_t seed_ = 0;
  std::vector<DecisionTree> trees_;
};

}  // namespace harpioneer
