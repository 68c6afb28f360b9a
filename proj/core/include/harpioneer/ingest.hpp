#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harpioneer/catalog.hpp"
#include "harpioneer/labels.hpp"

namespace harpioneer {

struct GroupSeries {
  std::string modality;
  std::array<std::vector<double>, 3> axes;

  bool is_accelerometer() const noexcept;
};

struct LocationSeries {
  std::string location_id;
  std::vector<GroupSeries> groups;
};

struct Provenance {
  std::string subject;
  std::string run;
  std::filesystem::path source;
};

/// One dataset file restricted to the selected sensor locations. Immutable
/// once loaded; share it as std::shared_ptr<const Recording>.
struct Recording {
  double sample_rate_hz = 30.0;
  std::vector<double> timestamps_ms;
  std::vector<LocationSeries> locations;
  std::vector<ActivityLabel> labels;
  Provenance provenance;

  std::size_t size() const noexcept { return labels.size(); }
};

struct LoadOptions {
  /// Overrides the catalog's sample rate.
  std::optional<double> sample_rate_hz;
};

/// Splits "S1-ADL3.dat" into subject "S1" and run "ADL3". Other names keep the
/// whole stem as subject and an empty run.
Provenance provenance_from_path(const std::filesystem::path& path);

/// Reads a whitespace-separated Opportunity file, keeping the selected
/// locations' channels and the Locomotion labels. Missing samples ("NaN") are
/// imputed per channel.
Recording load_recording(const std::filesystem::path& path, std::span<const std::string> selection,
                         const SensorCatalog& catalog, const LoadOptions& options = {});

/// Fills each maximal NaN run with the mean of the valid samples on either
/// side. Leading runs take the first valid value, trailing runs the last; an
/// all-missing series becomes zeros.
std::vector<double> impute_missing(std::span<const double> series);

}  // namespace harpioneer
