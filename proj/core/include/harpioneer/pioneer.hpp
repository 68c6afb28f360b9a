#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harpioneer/catalog.hpp"
#include "harpioneer/evaluation.hpp"
#include "harpioneer/features.hpp"

namespace harpioneer {

/// Plain-text templates with {{name}} placeholders, {{#name}}...{{/name}}
/// blocks (kept only when the variable is non-empty) and {{>name}} partials
/// that include name.tmpl from the same set.
class PromptTemplates {
 public:
  using Vars = std::map<std::string, std::string>;

  static PromptTemplates load(const std::filesystem::path& dir);
  static PromptTemplates from_map(std::map<std::string, std::string> sources);

  /// Throws PromptError on an unknown template, unknown placeholder or
  /// unbalanced block.
  std::string render(const std::string& name, const Vars& vars) const;

 private:
  std::string render_text(std::string_view text, const Vars& vars, int depth) const;

  std::map<std::string, std::string> sources_;
};

struct SensorDescription {
  std::string id;
  std::string name;
};

struct PromptContext {
  std::string role_text;
  std::string task_description;
  std::vector<std::string> label_names;
  /// Optional one-line description per label name.
  std::map<std::string, std::string> label_descriptions;
  std::vector<SensorDescription> current_sensors;
  std::vector<std::string> current_features;
  std::optional<EvaluationReport> evaluation;
  std::string task_instruction;
  std::string feature_task_instruction;
};

/// Default wording for the given sensors and features.
PromptContext default_prompt_context(const SensorCatalog& catalog,
                                     std::span<const std::string> sensor_ids,
                                     std::span<const FeatureSpec> features,
                                     std::optional<EvaluationReport> evaluation = std::nullopt);

enum class PromptVariant { A, B };

/// Variant A: role, problem, labels, current features, task. Variant B adds
/// the "Current result" section built by summarize_confusions.
std::string render_sensor_prompt(const PromptContext& ctx, PromptVariant variant,
                                 const PromptTemplates& templates);

std::string render_feature_prompt(const PromptContext& ctx, const PromptTemplates& templates);

/// Accuracy/F1 line followed by the top_k largest off-diagonal cells.
std::string summarize_confusions(const EvaluationReport& report, std::size_t top_k = 3);

enum class SuggestionKind { Sensor, Feature };

struct SuggestionSet {
  SuggestionKind kind = SuggestionKind::Sensor;
  std::vector<std::string> resolved;
  std::vector<std::string> unresolved;
  std::string raw_reply;
  std::string prompt_fingerprint;

  std::string to_json() const;
  static SuggestionSet from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static SuggestionSet load(const std::filesystem::path& path);
};

/// Candidate phrases from numbered/bulleted lines (text before the first
/// ':'), plus the entries of a trailing "<block_key>: [ ... ]" block. Replies
/// without list lines fall back to every non-empty line.
std::vector<std::string> extract_candidate_items(std::string_view reply, std::string_view block_key);

/// Lowercased phrase with markdown, quotes and filler words removed.
std::string normalize_phrase(std::string_view item);

/// Matches the feature registry (ids, then aliases, then longest alias
/// contained at word boundaries). Throws like SensorCatalog::resolve.
const FeatureInfo& resolve_feature_name(std::string_view name);

SuggestionSet parse_sensor_suggestions(std::string_view reply, const SensorCatalog& catalog,
                                       std::string prompt_fingerprint = {});
SuggestionSet parse_feature_suggestions(std::string_view reply,
                                        std::string prompt_fingerprint = {});

}  // namespace harpioneer
