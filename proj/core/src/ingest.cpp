#include "harpioneer/ingest.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/paths.hpp"

namespace harpioneer {

namespace fs = std::filesystem;

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

bool parse_cell(std::string_view token, double& out) {
  if (token == "NaN" || token == "nan" || token == "NAN") {
    out = kMissing;
    return true;
  }
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace

bool GroupSeries::is_accelerometer() const noexcept {
  return modality == "acc" || modality == "imu_acc";
}

Provenance provenance_from_path(const fs::path& path) {
  Provenance p;
  p.source = path;
  const std::string stem = path.stem().string();
  const auto dash = stem.find('-');
  if (dash == std::string::npos) {
    p.subject = stem;
  } else {
    p.subject = stem.substr(0, dash);
    p.run = stem.substr(dash + 1);
  }
  return p;
}

std::vector<double> impute_missing(std::span<const double> series) {
  std::vector<double> out(series.begin(), series.end());
  const std::size_t n = out.size();
  std::size_t i = 0;
  bool seen_valid = false;
  double prev = 0.0;
  while (i < n) {
    if (!std::isnan(out[i])) {
      prev = out[i];
      seen_valid = true;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && std::isnan(out[j])) ++j;
    double fill = 0.0;
    if (seen_valid && j < n) {
      fill = (prev + out[j]) / 2.0;
    } else if (seen_valid) {
      fill = prev;
    } else if (j < n) {
      fill = out[j];
    }
    for (std::size_t k = i; k < j; ++k) out[k] = fill;
    i = j;
  }
  return out;
}

Recording load_recording(const fs::path& path, std::span<const std::string> selection,
                         const SensorCatalog& catalog, const LoadOptions& options) {
  if (selection.empty()) throw ConfigError("empty sensor selection");

  // (column index -> destination series) for every selected channel.
  struct Target {
    int column;
    std::size_t location;
    std::size_t group;
    std::size_t axis;
  };
  Recording rec;
  std::vector<Target> targets;
  for (const auto& id : selection) {
    const SensorLocation& loc = catalog.at(id);
    LocationSeries series;
    series.location_id = loc.id;
    for (std::size_t g = 0; g < loc.groups.size(); ++g) {
      series.groups.push_back(GroupSeries{loc.groups[g].modality, {}});
      for (std::size_t a = 0; a < 3; ++a) {
        targets.push_back({loc.groups[g].columns[a], rec.locations.size(), g, a});
      }
    }
    rec.locations.push_back(std::move(series));
  }
  rec.sample_rate_hz = options.sample_rate_hz.value_or(catalog.sample_rate_hz());
  if (!(rec.sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
  rec.provenance = provenance_from_path(path);

  const std::string text = read_file(path);
  const std::string source = path.string();
  const auto expected_cells = static_cast<std::size_t>(catalog.column_count());
  std::vector<double> row(expected_cells);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    std::size_t cells = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && is_blank(line[i])) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !is_blank(line[j])) ++j;
      const std::string_view token = line.substr(i, j - i);
      if (cells >= expected_cells) {
        throw ParseError(source, line_no, fmt::format("more than {} columns", expected_cells));
      }
      if (!parse_cell(token, row[cells])) {
        throw ParseError(source, line_no,
                         fmt::format("column {}: non-numeric value '{}'", cells + 1, token));
      }
      ++cells;
      i = j;
    }
    if (cells == 0) continue;
    if (cells != expected_cells) {
      throw ParseError(source, line_no,
                       fmt::format("expected {} columns, found {}", expected_cells, cells));
    }

    const double t = row[static_cast<std::size_t>(catalog.time_column() - 1)];
    if (std::isnan(t)) throw ParseError(source, line_no, "missing timestamp");
    if (!rec.timestamps_ms.empty() && t < rec.timestamps_ms.back()) {
      throw ParseError(source, line_no, "timestamps decrease");
    }
    rec.timestamps_ms.push_back(t);
    const double code = row[static_cast<std::size_t>(catalog.label_column() - 1)];
    rec.labels.push_back(std::isnan(code) ? ActivityLabel::Others
                                          : catalog.map_locomotion_label(static_cast<int>(code)));
    for (const auto& target : targets) {
      rec.locations[target.location].groups[target.group].axes[target.axis].push_back(
          row[static_cast<std::size_t>(target.column - 1)]);
    }
  }
  if (rec.labels.empty()) throw ParseError(source, line_no, "file contains no samples");

  for (auto& loc : rec.locations) {
    for (auto& group : loc.groups) {
      for (auto& axis : group.axes) axis = impute_missing(axis);
    }
  }
  return rec;
}

}  // namespace harpioneer
