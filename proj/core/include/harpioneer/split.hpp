#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "harpioneer/ingest.hpp"

namespace harpioneer {

/// Run-name globs deciding which recordings train and which test. Runs
/// matching neither side are ignored.
struct SplitProtocol {
  std::vector<std::string> train_runs{"ADL1", "ADL2", "ADL3", "Drill"};
  std::vector<std::string> test_runs{"ADL4", "ADL5"};

  bool operator==(const SplitProtocol&) const = default;
};

struct TrainTestSplit {
  std::vector<std::shared_ptr<const Recording>> train;
  std::vector<std::shared_ptr<const Recording>> test;
};

bool glob_match(std::string_view pattern, std::string_view text);

/// A run matching both sides goes to training. Throws DatasetError when
/// either side ends up empty.
TrainTestSplit split_train_test(std::span<const std::shared_ptr<const Recording>> recordings,
                                const SplitProtocol& protocol = {});

}  // namespace harpioneer
