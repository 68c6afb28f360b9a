#pragma once

#include <map>
#include <string>
#include <vector>

#include "harpioneer/experiment.hpp"

namespace harpioneer {

struct PublishedResult {
  PresetId preset;
  double accuracy_pct;
  double f1_pct;
};

/// Accuracy and F1 of the six result-table rows, in percent.
const std::vector<PublishedResult>& published_results();

inline constexpr double kReproductionTolerancePts = 8.0;

struct ReproductionRow {
  PresetId preset;
  double published_accuracy_pct = 0.0;
  double published_f1_pct = 0.0;
  double accuracy_pct = 0.0;
  double f1_pct = 0.0;
  bool flagged = false;  // |accuracy - published| > tolerance
};

struct DirectionalCheck {
  std::string claim;
  bool holds = false;
};

struct ReproductionReport {
  std::vector<ReproductionRow> rows;
  std::vector<DirectionalCheck> checks;

  std::string to_json() const;
  std::string to_table() const;
};

/// Compares measured reports (keyed by preset) with the published numbers and
/// evaluates (b) > (a), (f) >= (e), (c) >= (b).
ReproductionReport compare_with_published(const std::map<PresetId, ExperimentReport>& measured);

}  // namespace harpioneer
