#include "harpioneer/evaluation.hpp"

#include <fmt/format.h>

#include "harpioneer/errors.hpp"

namespace harpioneer {

EvaluationReport report_from_confusion(const ConfusionMatrix& confusion) {
  EvaluationReport r;
  r.confusion = confusion;
  std::uint64_t correct = 0;
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    for (std::size_t p = 0; p < kNumClasses; ++p) r.n_windows += confusion[t][p];
    correct += confusion[t][t];
  }
  if (r.n_windows == 0) throw Error("cannot evaluate an empty confusion matrix");
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n_windows);

  double f1_sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::uint64_t truth_count = 0;
    std::uint64_t pred_count = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      truth_count += confusion[c][k];
      pred_count += confusion[k][c];
    }
    const double tp = static_cast<double>(confusion[c][c]);
    const double precision = pred_count == 0 ? 0.0 : tp / static_cast<double>(pred_count);
    const double recall = truth_count == 0 ? 0.0 : tp / static_cast<double>(truth_count);
    r.per_class_f1[c] =
        precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
    r.class_present[c] = truth_count > 0 || pred_count > 0;
    if (r.class_present[c]) {
      f1_sum += r.per_class_f1[c];
      ++present;
    }
  }
  r.macro_f1 = f1_sum / static_cast<double>(present);
  return r;
}

EvaluationReport evaluate(std::span<const ActivityLabel> predicted,
                          std::span<const ActivityLabel> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(fmt::format("prediction/truth length mismatch ({} vs {})", predicted.size(),
                            truth.size()));
  }
  if (truth.empty()) throw Error("cannot evaluate zero predictions");
  ConfusionMatrix confusion{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++confusion[label_index(truth[i])][label_index(predicted[i])];
  }
  return report_from_confusion(confusion);
}

}  // namespace harpioneer
