#include "harpioneer/split.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <string>

#include "harpioneer/errors.hpp"

namespace harpioneer {

bool glob_match(std::string_view pattern, std::string_view text) {
  const std::string p(pattern);
  const std::string t(text);
  return ::fnmatch(p.c_str(), t.c_str(), 0) == 0;
}

namespace {

bool any_match(const std::vector<std::string>& globs, const std::string& run) {
  return std::any_of(globs.begin(), globs.end(), [&](const auto& g) { return glob_match(g, run); });
}

}  // namespace

TrainTestSplit split_train_test(std::span<const std::shared_ptr<const Recording>> recordings,
                                const SplitProtocol& protocol) {
  TrainTestSplit split;
  for (const auto& rec : recordings) {
    const std::string& run = rec->provenance.run;
    if (any_match(protocol.train_runs, run)) {
      split.train.push_back(rec);
    } else if (any_match(protocol.test_runs, run)) {
      split.test.push_back(rec);
    }
  }
  if (split.train.empty()) throw DatasetError("train/test split left the training side empty");
  if (split.test.empty()) throw DatasetError("train/test split left the test side empty");
  return split;
}

}  // namespace harpioneer
