#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harpioneer/catalog.hpp"
#include "harpioneer/evaluation.hpp"
#include "harpioneer/features.hpp"
#include "harpioneer/model.hpp"
#include "harpioneer/pioneer.hpp"
#include "harpioneer/split.hpp"

namespace harpioneer {

inline constexpr std::uint64_t kDefaultSeed = 20230524;

struct ExperimentConfig {
  std::string preset;  // "a".."f", or empty for custom configs
  std::filesystem::path dataset_root;
  std::vector<std::string> subject_globs{"S*"};
  std::vector<std::string> run_globs{"*"};
  std::vector<std::string> sensors;
  std::vector<FeatureSpec> features;
  double window_s = 5.0;
  double overlap_frac = 0.3;
  double sample_rate_hz = 30.0;
  ForestParams classifier;
  std::uint64_t seed = kDefaultSeed;
  SplitProtocol split;
  bool drop_others = false;
  std::vector<std::string> provenance;

  /// JSON with keys in canonical (sorted) order.
  std::string to_json() const;
  static ExperimentConfig from_json(std::string_view text);
  std::string fingerprint() const;

  void save(const std::filesystem::path& path) const;
  static ExperimentConfig load(const std::filesystem::path& path);

  bool operator==(const ExperimentConfig&) const = default;
};

enum class PresetId { A, B, C, D, E, F };

std::optional<PresetId> parse_preset(std::string_view text) noexcept;
std::string_view preset_letter(PresetId id) noexcept;
std::string_view preset_title(PresetId id) noexcept;

std::vector<std::string> baseline_sensor_ids();
std::vector<std::string> pioneering_a_sensor_ids();
std::vector<std::string> pioneering_b_sensor_ids();

/// Sensor and feature sets of the six result-table rows.
ExperimentConfig preset_config(PresetId id, const SensorCatalog& catalog,
                               const std::filesystem::path& dataset_root);

struct ExperimentReport {
  std::string preset;
  std::string config_fingerprint;
  EvaluationReport pooled;
  std::map<std::string, EvaluationReport> per_subject;
  double subject_mean_accuracy = 0.0;
  double subject_mean_macro_f1 = 0.0;
  std::uint64_t train_windows = 0;
  std::uint64_t test_windows = 0;
  std::vector<std::string> sensors;
  std::vector<std::string> features;
  std::size_t feature_columns = 0;

  std::string to_json() const;
  static ExperimentReport from_json(std::string_view text);
  static ExperimentReport load(const std::filesystem::path& path);
};

/// Dataset files under config.dataset_root matching the subject and run globs,
/// sorted by name. Throws DatasetError when none match.
std::vector<std::filesystem::path> find_dataset_files(const ExperimentConfig& config);

/// ingest -> window -> featurize -> split -> train -> predict -> evaluate.
/// Stage failures surface as StageError.
ExperimentReport run_experiment(const ExperimentConfig& config, const SensorCatalog& catalog);

/// Directory of "<fingerprint>.json" reports plus index.json.
class ResultsStore {
 public:
  explicit ResultsStore(std::filesystem::path dir);

  std::filesystem::path write(const ExperimentReport& report) const;
  std::filesystem::path path_for(const std::string& fingerprint) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

enum class ApplyMode { Union, Replace };

/// Returns a new config with the suggestion's ids merged in. Union keeps the
/// current set and appends new ids; Replace uses exactly the suggested ids.
/// Throws ConfigError when nothing was resolved.
ExperimentConfig apply_suggestions(const ExperimentConfig& config, const SuggestionSet& suggestions,
                                   ApplyMode mode = ApplyMode::Union);

}  // namespace harpioneer
