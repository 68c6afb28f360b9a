#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harpioneer/labels.hpp"
#include "harpioneer/windowing.hpp"

namespace harpioneer {

/// What a feature consumes: one axis, a full triad, or an accelerometer triad.
enum class FeatureScope { Axis, Triad, AccelerometerTriad };

struct FeatureInfo {
  std::string_view id;
  std::string_view display_name;
  FeatureScope scope;
  std::vector<std::string_view> aliases;  // lowercase, used by suggestion parsing
  std::map<std::string, double> default_params;
};

/// Closed registry, in canonical order: the five baseline statistics followed
/// by the ten augmented features.
const std::vector<FeatureInfo>& feature_registry();
const FeatureInfo* find_feature(std::string_view id) noexcept;

struct FeatureSpec {
  std::string name;
  std::map<std::string, double> params;

  /// Spec with the registry's default parameters. Throws ConfigError for
  /// unknown names.
  static FeatureSpec make(std::string_view name);

  /// Throws ConfigError on unknown names or out-of-range parameters.
  void validate() const;
  double param(const std::string& key) const;

  bool operator==(const FeatureSpec&) const = default;
};

std::vector<FeatureSpec> baseline_feature_specs();
std::vector<FeatureSpec> augmented_feature_specs();
/// Baseline followed by augmented: all fifteen.
std::vector<FeatureSpec> full_feature_specs();

namespace features {

struct BasicStats {
  double mean = 0.0;
  double std = 0.0;
  double var = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct PitchRoll {
  double pitch = 0.0;  // radians
  double roll = 0.0;   // radians
};

/// Population moments (divide by N).
BasicStats basic_stats(std::span<const double> x);
double sma(std::span<const double> x, std::span<const double> y, std::span<const double> z);
double energy(std::span<const double> x);
/// Normalized value-histogram entropy in [0, 1].
double entropy(std::span<const double> x, std::size_t bins = 16);
double zero_crossing_rate(std::span<const double> x);
double mean_crossing_rate(std::span<const double> x);
/// |X_1| ... |X_k|; requires N >= 2k + 2.
std::vector<double> fft_coefficients(std::span<const double> x, std::size_t k = 5);
/// Pearson correlation; 0 when either input is constant.
double axis_correlation(std::span<const double> a, std::span<const double> b);
/// From the window means of an accelerometer triad.
PitchRoll pitch_roll(std::span<const double> x, std::span<const double> y,
                     std::span<const double> z);
/// Mean absolute first difference times the sample rate.
double jerk(std::span<const double> x, double sample_rate_hz);
/// Frequency of the largest non-DC bin in 1..floor(N/2); ties go to the lowest bin.
double peak_frequency(std::span<const double> x, double sample_rate_hz);

}  // namespace features

/// Channel structure a schema is computed from: location ids with their
/// group modalities.
struct ChannelLayout {
  struct Location {
    std::string id;
    std::vector<std::string> modalities;

    bool operator==(const Location&) const = default;
  };
  std::vector<Location> locations;

  static ChannelLayout of(const Recording& recording);
  bool operator==(const ChannelLayout&) const = default;
};

/// Ordered column names "loc.modality_axis.feature[.param]" (per-axis) and
/// "loc.modality.feature[.part]" (per-triad). Depends only on layout and specs.
std::vector<std::string> feature_schema(const ChannelLayout& layout,
                                        std::span<const FeatureSpec> specs);

struct FeatureVector {
  std::vector<std::string> columns;
  std::vector<double> values;
};

FeatureVector featurize_window(const Window& window, std::span<const FeatureSpec> specs);

/// Row-major matrix of window features sharing one schema.
struct FeatureMatrix {
  std::vector<std::string> columns;
  std::vector<double> data;
  std::size_t rows = 0;

  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * columns.size(), columns.size()};
  }
  std::size_t cols() const noexcept { return columns.size(); }
};

/// Featurizes windows (parallel across windows; rows keep input order).
/// All windows must share a channel layout.
FeatureMatrix featurize_windows(std::span<const Window> windows, std::span<const FeatureSpec> specs);

/// CSV with the schema as header plus a trailing "label" column.
void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix,
                       std::span<const ActivityLabel> labels);

}  // namespace harpioneer
