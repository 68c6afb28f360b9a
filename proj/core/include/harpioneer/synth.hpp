#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "harpioneer/catalog.hpp"

namespace harpioneer {

struct SynthOptions {
  std::uint64_t seed = 7;
  int n_subjects = 1;
  double duration_s = 600.0;
  double nan_rate = 0.01;
  std::vector<std::string> runs{"ADL1", "ADL2", "ADL3", "ADL4", "ADL5", "Drill"};
  double min_segment_s = 20.0;
  double max_segment_s = 60.0;
};

/// Writes Opportunity-format files "S<k>-<run>.dat" whose five classes each
/// follow a distinct regime (gravity direction, dominant frequency,
/// amplitude). Catalog channels receive NaN runs at roughly `nan_rate`.
std::vector<std::filesystem::path> synthesize_dataset(const std::filesystem::path& out_dir,
                                                      const SynthOptions& options,
                                                      const SensorCatalog& catalog);

}  // namespace harpioneer
