#include "harpioneer/catalog.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/paths.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace harpioneer {

using nlohmann::json;

bool ChannelGroup::is_accelerometer() const noexcept {
  return modality == "acc" || modality == "imu_acc";
}

std::vector<int> SensorLocation::channel_columns() const {
  std::vector<int> cols;
  for (const auto& g : groups) cols.insert(cols.end(), g.columns.begin(), g.columns.end());
  return cols;
}

bool SensorLocation::has_accelerometer() const noexcept {
  return std::any_of(groups.begin(), groups.end(),
                     [](const ChannelGroup& g) { return g.is_accelerometer(); });
}

SensorCatalog SensorCatalog::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

SensorCatalog SensorCatalog::parse(std::string_view json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
  try {
    SensorCatalog cat;
    cat.version_ = doc.at("version").get<std::string>();
    cat.column_count_ = doc.at("column_count").get<int>();
    cat.time_column_ = doc.value("time_column", 1);
    cat.sample_rate_hz_ = doc.value("sample_rate_hz", 30.0);
    const auto& loco = doc.at("locomotion");
    cat.label_column_ = loco.at("column").get<int>();
    for (const auto& [code, name] : loco.at("codes").items()) {
      const auto label = parse_label(name.get<std::string>());
      if (!label) throw ConfigError(fmt::format("{}: unknown class '{}'", source, name.get<std::string>()));
      cat.codes_[std::stoi(code)] = *label;
    }
    for (const auto& item : doc.at("locations")) {
      SensorLocation loc;
      loc.id = item.at("id").get<std::string>();
      loc.name = item.value("name", loc.id);
      loc.aliases = item.value("aliases", std::vector<std::string>{});
      for (const auto& g : item.at("groups")) {
        ChannelGroup group;
        group.modality = g.at("modality").get<std::string>();
        const auto cols = g.at("columns").get<std::vector<int>>();
        if (cols.size() != 3) {
          throw ConfigError(fmt::format("{}: {} group '{}' needs 3 columns", source, loc.id, group.modality));
        }
        std::copy(cols.begin(), cols.end(), group.columns.begin());
        loc.groups.push_back(std::move(group));
      }
      cat.locations_.push_back(std::move(loc));
    }
    cat.validate();
    return cat;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
}

SensorCatalog SensorCatalog::from_parts(std::vector<SensorLocation> locations,
                                        std::map<int, ActivityLabel> locomotion_codes,
                                        int column_count, int label_column, int time_column,
                                        double sample_rate_hz) {
  SensorCatalog cat;
  cat.version_ = "custom";
  cat.locations_ = std::move(locations);
  cat.codes_ = std::move(locomotion_codes);
  cat.column_count_ = column_count;
  cat.label_column_ = label_column;
  cat.time_column_ = time_column;
  cat.sample_rate_hz_ = sample_rate_hz;
  cat.validate();
  return cat;
}

void SensorCatalog::validate() const {
  if (locations_.empty()) throw ConfigError("catalog has no locations");
  if (!(sample_rate_hz_ > 0.0)) throw ConfigError("catalog sample rate must be positive");
  const auto in_range = [&](int c) { return c >= 1 && c <= column_count_; };
  if (!in_range(time_column_) || !in_range(label_column_)) {
    throw ConfigError("catalog time/label column out of range");
  }
  std::set<std::string> ids;
  std::set<int> used{time_column_, label_column_};
  for (const auto& loc : locations_) {
    if (!ids.insert(detail::to_lower(loc.id)).second) {
      throw ConfigError(fmt::format("duplicate location id '{}'", loc.id));
    }
    if (loc.groups.empty()) throw ConfigError(fmt::format("location '{}' has no channels", loc.id));
    for (const auto& alias : loc.aliases) {
      if (alias != detail::to_lower(alias)) {
        throw ConfigError(fmt::format("alias '{}' of '{}' must be lowercase", alias, loc.id));
      }
    }
    for (int c : loc.channel_columns()) {
      if (!in_range(c)) throw ConfigError(fmt::format("column {} of '{}' out of range", c, loc.id));
      if (!used.insert(c).second) {
        throw ConfigError(fmt::format("column {} of '{}' is already assigned", c, loc.id));
      }
    }
  }
}

std::vector<std::string> SensorCatalog::ids() const {
  std::vector<std::string> out;
  out.reserve(locations_.size());
  for (const auto& loc : locations_) out.push_back(loc.id);
  return out;
}

const SensorLocation* SensorCatalog::find(std::string_view id) const noexcept {
  for (const auto& loc : locations_) {
    if (loc.id == id) return &loc;
  }
  return nullptr;
}

const SensorLocation& SensorCatalog::at(std::string_view id) const {
  if (const auto* loc = find(id)) return *loc;
  throw ConfigError(fmt::format("unknown sensor location '{}'", id));
}

const SensorLocation& SensorCatalog::resolve(std::string_view name_or_alias) const {
  std::vector<detail::NameEntry> entries;
  entries.reserve(locations_.size());
  for (const auto& loc : locations_) entries.push_back({loc.id, loc.aliases});
  return locations_[detail::resolve_name(name_or_alias, entries)];
}

ActivityLabel SensorCatalog::map_locomotion_label(int raw_code) const noexcept {
  const auto it = codes_.find(raw_code);
  return it == codes_.end() ? ActivityLabel::Others : it->second;
}

}  // namespace harpioneer
