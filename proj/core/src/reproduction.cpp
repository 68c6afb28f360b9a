#include "harpioneer/reproduction.hpp"

#include <cmath>

#include <fmt/format.h>

#include "json.hpp"

namespace harpioneer {

const std::vector<PublishedResult>& published_results() {
  static const std::vector<PublishedResult> rows{
      {PresetId::A, 74.3, 75.4}, {PresetId::B, 81.2, 82.9}, {PresetId::C, 83.3, 84.8},
      {PresetId::D, 78.5, 80.6}, {PresetId::E, 80.5, 82.0}, {PresetId::F, 81.3, 82.8},
  };
  return rows;
}

ReproductionReport compare_with_published(const std::map<PresetId, ExperimentReport>& measured) {
  ReproductionReport out;
  for (const auto& pub : published_results()) {
    const auto it = measured.find(pub.preset);
    if (it == measured.end()) continue;
    ReproductionRow row;
    row.preset = pub.preset;
    row.published_accuracy_pct = pub.accuracy_pct;
    row.published_f1_pct = pub.f1_pct;
    row.accuracy_pct = it->second.pooled.accuracy * 100.0;
    row.f1_pct = it->second.pooled.macro_f1 * 100.0;
    row.flagged = std::abs(row.accuracy_pct - pub.accuracy_pct) > kReproductionTolerancePts;
    out.rows.push_back(row);
  }

  const auto acc = [&](PresetId id) -> std::optional<double> {
    const auto it = measured.find(id);
    if (it == measured.end()) return std::nullopt;
    return it->second.pooled.accuracy;
  };
  const auto check = [&](PresetId lhs, PresetId rhs, bool strict) {
    DirectionalCheck c;
    c.claim = fmt::format("({}) {} ({})", preset_letter(lhs), strict ? ">" : ">=", preset_letter(rhs));
    const auto l = acc(lhs);
    const auto r = acc(rhs);
    if (!l || !r) {
      c.claim += " [not measured]";
    } else {
      c.holds = strict ? *l > *r : *l >= *r;
    }
    out.checks.push_back(std::move(c));
  };
  check(PresetId::B, PresetId::A, true);
  check(PresetId::F, PresetId::E, false);
  check(PresetId::C, PresetId::B, false);
  return out;
}

std::string ReproductionReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"preset", preset_letter(r.preset)},
                         {"published_accuracy_pct", r.published_accuracy_pct},
                         {"published_f1_pct", r.published_f1_pct},
                         {"accuracy_pct", r.accuracy_pct},
                         {"f1_pct", r.f1_pct},
                         {"flagged", r.flagged}});
  }
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) checks_json.push_back({{"claim", c.claim}, {"holds", c.holds}});
  return nlohmann::json{{"tolerance_pts", kReproductionTolerancePts}, {"rows", rows_json}, {"checks", checks_json}}
             .dump(2) +
         "\n";
}

std::string ReproductionReport::to_table() const {
  std::string out = fmt::format("{:<7}{:>10}{:>10}{:>10}{:>10}{:>9}  {}\n", "preset", "pub acc", "pub F1",
                                "acc", "F1", "delta", "");
  for (const auto& r : rows) {
    out += fmt::format("{:<7}{:>10.1f}{:>10.1f}{:>10.1f}{:>10.1f}{:>+9.1f}  {}\n", preset_letter(r.preset),
                       r.published_accuracy_pct, r.published_f1_pct, r.accuracy_pct, r.f1_pct,
                       r.accuracy_pct - r.published_accuracy_pct, r.flagged ? "FLAGGED" : "");
  }
  for (const auto& c : checks) out += fmt::format("{}: {}\n", c.claim, c.holds ? "holds" : "does not hold");
  return out;
}

}  // namespace harpioneer
