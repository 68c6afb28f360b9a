#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "harpioneer/labels.hpp"

namespace harpioneer {

using ConfusionMatrix = std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses>;

/// Rows are truth, columns prediction, both in ActivityLabel order.
struct EvaluationReport {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::array<double, kNumClasses> per_class_f1{};
  /// Classes seen in truth or prediction; macro_f1 averages over these.
  std::array<bool, kNumClasses> class_present{};
  ConfusionMatrix confusion{};
  std::uint64_t n_windows = 0;
  std::string config_fingerprint;

  bool operator==(const EvaluationReport&) const = default;
};

EvaluationReport evaluate(std::span<const ActivityLabel> predicted,
                          std::span<const ActivityLabel> truth);

/// Recomputes accuracy and F1 from a confusion matrix.
EvaluationReport report_from_confusion(const ConfusionMatrix& confusion);

}  // namespace harpioneer
