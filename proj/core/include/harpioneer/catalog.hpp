#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "harpioneer/labels.hpp"

namespace harpioneer {

/// Three columns of one sensor modality (accelerometer, gyroscope, ...).
struct ChannelGroup {
  std::string modality;
  std::array<int, 3> columns{};  // 1-based indices into the dataset file

  /// "acc" and "imu_acc" groups are accelerometer triads.
  bool is_accelerometer() const noexcept;
};

struct SensorLocation {
  std::string id;
  std::string name;  // human-readable body position used in prompts
  std::vector<std::string> aliases;
  std::vector<ChannelGroup> groups;

  std::vector<int> channel_columns() const;
  bool has_accelerometer() const noexcept;
};

/// Channel map and label code table of an Opportunity-format dataset, loaded
/// from a versioned JSON data file.
class SensorCatalog {
 public:
  static SensorCatalog load(const std::filesystem::path& path);
  static SensorCatalog parse(std::string_view json_text, const std::string& source = "<catalog>");
  /// Catalog from explicit parts; validated like a loaded one.
  static SensorCatalog from_parts(std::vector<SensorLocation> locations,
                                  std::map<int, ActivityLabel> locomotion_codes,
                                  int column_count, int label_column, int time_column = 1,
                                  double sample_rate_hz = 30.0);

  const std::string& version() const noexcept { return version_; }
  int column_count() const noexcept { return column_count_; }
  int time_column() const noexcept { return time_column_; }
  int label_column() const noexcept { return label_column_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  const std::vector<SensorLocation>& locations() const noexcept { return locations_; }
  const std::map<int, ActivityLabel>& locomotion_codes() const noexcept { return codes_; }

  std::vector<std::string> ids() const;
  const SensorLocation* find(std::string_view id) const noexcept;
  /// Throws ConfigError naming the id when absent.
  const SensorLocation& at(std::string_view id) const;

  /// Case-insensitive match on id, then on alias, then on the longest alias
  /// contained in the text at word boundaries. Throws UnresolvedNameError or
  /// AmbiguousNameError.
  const SensorLocation& resolve(std::string_view name_or_alias) const;

  /// Raw Locomotion code to class; code 0 and unknown codes map to Others.
  ActivityLabel map_locomotion_label(int raw_code) const noexcept;

 private:
  void validate() const;

  std::string version_;
  int column_count_ = 0;
  int time_column_ = 1;
  int label_column_ = 0;
  double sample_rate_hz_ = 30.0;
  std::vector<SensorLocation> locations_;
  std::map<int, ActivityLabel> codes_;
};

}  // namespace harpioneer
