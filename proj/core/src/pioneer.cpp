#include "harpioneer/pioneer.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/hash.hpp"
#include "harpioneer/paths.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace harpioneer {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- templates

PromptTemplates PromptTemplates::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw PromptError(fmt::format("template directory {} not found", dir.string()));
  std::map<std::string, std::string> sources;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".tmpl") sources[entry.path().stem().string()] = read_file(entry.path());
  }
  return from_map(std::move(sources));
}

PromptTemplates PromptTemplates::from_map(std::map<std::string, std::string> sources) {
  PromptTemplates t;
  t.sources_ = std::move(sources);
  return t;
}

std::string PromptTemplates::render(const std::string& name, const Vars& vars) const {
  const auto it = sources_.find(name);
  if (it == sources_.end()) throw PromptError(fmt::format("unknown template '{}'", name));
  return render_text(it->second, vars, 0);
}

std::string PromptTemplates::render_text(std::string_view text, const Vars& vars, int depth) const {
  if (depth > 8) throw PromptError("template partials nest too deeply");
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    const std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) throw PromptError("unterminated '{{' in template");
    const std::string tag(detail::trim(text.substr(open + 2, close - open - 2)));
    std::size_t next = close + 2;
    const bool line_start = open == 0 || text[open - 1] == '\n';
    const auto skip_newline = [&](std::size_t at) {
      return line_start && at < text.size() && text[at] == '\n' ? at + 1 : at;
    };

    if (tag.empty()) throw PromptError("empty template tag");
    if (tag[0] == '#') {
      const std::string name(detail::trim(std::string_view(tag).substr(1)));
      const std::string end_tag = "{{/" + name + "}}";
      const std::size_t end = text.find(end_tag, next);
      if (end == std::string_view::npos) throw PromptError(fmt::format("block '{}' is not closed", name));
      const auto var = vars.find(name);
      if (var != vars.end() && !var->second.empty()) {
        out += render_text(text.substr(skip_newline(next), end - skip_newline(next)), vars, depth);
      }
      const bool end_line_start = end == 0 || text[end - 1] == '\n';
      next = end + end_tag.size();
      if (end_line_start && next < text.size() && text[next] == '\n') ++next;
    } else if (tag[0] == '/') {
      throw PromptError(fmt::format("unexpected '{{{{{}}}}}'", tag));
    } else if (tag[0] == '>') {
      const std::string name(detail::trim(std::string_view(tag).substr(1)));
      const auto it = sources_.find(name);
      if (it == sources_.end()) throw PromptError(fmt::format("unknown partial '{}'", name));
      std::string included = render_text(it->second, vars, depth + 1);
      // A partial file's final newline is dropped; the including line supplies it.
      if (!included.empty() && included.back() == '\n') included.pop_back();
      out += included;
    } else {
      const auto var = vars.find(tag);
      if (var == vars.end()) throw PromptError(fmt::format("unknown placeholder '{}'", tag));
      out += var->second;
    }
    pos = next;
  }
  return out;
}

// ---------------------------------------------------------------- context

PromptContext default_prompt_context(const SensorCatalog& catalog, std::span<const std::string> sensor_ids,
                                     std::span<const FeatureSpec> features,
                                     std::optional<EvaluationReport> evaluation) {
  PromptContext ctx;
  ctx.role_text =
      "You are an expert in human activity recognition using wearable sensors. You have many years "
      "of experience deciding where to attach accelerometers and IMUs on the human body and "
      "designing features from their signals for machine learning models.";
  ctx.task_description =
      "We are building a machine learning model that recognizes the mode of locomotion of a person "
      "during activities of daily living. The input data comes from wearable sensors attached to the "
      "body: 3-axis accelerometers (acc) and inertial measurement units (IMU: acc, gyroscope and "
      "magnetometer), sampled at 30 Hz. The signals are segmented with a sliding window of 5 seconds "
      "and 30% overlap, features are computed for every window, and the model predicts one activity "
      "label per window.";
  for (ActivityLabel l : kAllLabels) ctx.label_names.emplace_back(label_name(l));
  for (const auto& id : sensor_ids) {
    const auto& loc = catalog.at(id);
    ctx.current_sensors.push_back({loc.id, loc.name});
  }
  for (const auto& spec : features) {
    const FeatureInfo* info = find_feature(spec.name);
    if (info == nullptr) throw ConfigError(fmt::format("unknown feature '{}'", spec.name));
    ctx.current_features.emplace_back(info->display_name);
  }
  ctx.evaluation = std::move(evaluation);
  ctx.task_instruction =
      "Suggest new body locations where additional sensors should be attached to improve the "
      "recognition of these activity labels. Give one body location per numbered item and briefly "
      "explain which activities it helps to distinguish.";
  ctx.feature_task_instruction =
      "Suggest new feature calculations, in addition to the current features, that can be computed "
      "for every window from these sensors to improve the recognition accuracy. Give one feature per "
      "numbered item and briefly explain how to calculate it.";
  return ctx;
}

// ---------------------------------------------------------------- rendering

namespace {

const std::vector<std::string> kExpectedLabels = [] {
  std::vector<std::string> names;
  for (ActivityLabel l : kAllLabels) names.emplace_back(label_name(l));
  return names;
}();

void check_labels(const PromptContext& ctx) {
  if (ctx.label_names != kExpectedLabels) {
    throw PromptError("label_names must be exactly Stand, Sit, Walk, Lie, Others");
  }
}

std::string bullet_list(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += '\n';
    out += "- " + item;
  }
  return out;
}

std::string label_list(const PromptContext& ctx) {
  std::vector<std::string> items;
  for (const auto& name : ctx.label_names) {
    const auto it = ctx.label_descriptions.find(name);
    items.push_back(it == ctx.label_descriptions.end() ? name : name + ": " + it->second);
  }
  return bullet_list(items);
}

std::string sensor_list(const PromptContext& ctx) {
  std::vector<std::string> items;
  for (const auto& s : ctx.current_sensors) items.push_back(fmt::format("{} ({})", s.name, s.id));
  return bullet_list(items);
}

PromptTemplates::Vars common_vars(const PromptContext& ctx) {
  check_labels(ctx);
  if (ctx.current_sensors.empty()) throw PromptError("the prompt needs at least one current sensor");
  return {
      {"role_text", ctx.role_text},
      {"task_description", ctx.task_description},
      {"label_list", label_list(ctx)},
      {"current_sensors", sensor_list(ctx)},
      {"current_features", bullet_list(ctx.current_features)},
      {"current_feature_names", fmt::format("{}", fmt::join(ctx.current_features, ", "))},
      {"task_instruction", ctx.task_instruction},
      {"feature_task_instruction", ctx.feature_task_instruction},
      {"current_result", ""},
  };
}

}  // namespace

std::string render_sensor_prompt(const PromptContext& ctx, PromptVariant variant,
                                 const PromptTemplates& templates) {
  auto vars = common_vars(ctx);
  if (variant == PromptVariant::B) {
    if (!ctx.evaluation) throw PromptError("variant B needs an evaluation report for \"Current result\"");
    vars["current_result"] = summarize_confusions(*ctx.evaluation);
  }
  return templates.render("sensor_pioneering", vars);
}

std::string render_feature_prompt(const PromptContext& ctx, const PromptTemplates& templates) {
  if (ctx.current_features.empty()) throw PromptError("the feature prompt needs at least one current feature");
  return templates.render("feature_augmentation", common_vars(ctx));
}

std::string summarize_confusions(const EvaluationReport& report, std::size_t top_k) {
  std::string out = fmt::format("Overall accuracy: {:.1f}%, macro F1-score: {:.1f}% on {} test windows.",
                                report.accuracy * 100.0, report.macro_f1 * 100.0, report.n_windows);
  struct Cell {
    std::uint64_t count;
    std::size_t truth;
    std::size_t pred;
  };
  std::vector<Cell> cells;
  std::array<std::uint64_t, kNumClasses> truth_totals{};
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    for (std::size_t p = 0; p < kNumClasses; ++p) {
      truth_totals[t] += report.confusion[t][p];
      if (t != p && report.confusion[t][p] > 0) cells.push_back({report.confusion[t][p], t, p});
    }
  }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.count > b.count; });
  if (cells.empty() || top_k == 0) return out + "\nNo frequent misclassifications.";
  out += "\nFrequent misclassifications:";
  for (std::size_t i = 0; i < std::min(top_k, cells.size()); ++i) {
    const Cell& c = cells[i];
    out += fmt::format("\n- {} is often misclassified as {} ({} windows, {:.1f}% of {})",
                       label_name(kAllLabels[c.truth]), label_name(kAllLabels[c.pred]), c.count,
                       100.0 * static_cast<double>(c.count) / static_cast<double>(truth_totals[c.truth]),
                       label_name(kAllLabels[c.truth]));
  }
  return out;
}

// ---------------------------------------------------------------- suggestions

std::string SuggestionSet::to_json() const {
  json doc;
  doc["format"] = "harpioneer-suggestions";
  doc["version"] = 1;
  doc["kind"] = kind == SuggestionKind::Sensor ? "sensor" : "feature";
  doc["resolved"] = resolved;
  doc["unresolved"] = unresolved;
  doc["raw_reply"] = raw_reply;
  doc["prompt_fingerprint"] = prompt_fingerprint;
  return doc.dump(2) + "\n";
}

SuggestionSet SuggestionSet::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    SuggestionSet s;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "sensor") {
      s.kind = SuggestionKind::Sensor;
    } else if (kind == "feature") {
      s.kind = SuggestionKind::Feature;
    } else {
      throw ConfigError(fmt::format("unknown suggestion kind '{}'", kind));
    }
    s.resolved = doc.at("resolved").get<std::vector<std::string>>();
    s.unresolved = doc.value("unresolved", std::vector<std::string>{});
    s.raw_reply = doc.value("raw_reply", std::string{});
    s.prompt_fingerprint = doc.value("prompt_fingerprint", std::string{});
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("invalid suggestion file: {}", e.what()));
  }
}

void SuggestionSet::save(const fs::path& path) const { write_file_atomic(path, to_json()); }

SuggestionSet SuggestionSet::load(const fs::path& path) { return from_json(read_file(path)); }

namespace {

std::string strip_markdown(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '*' || c == '`' || c == '"' || c == '\'') continue;
    out.push_back(c);
  }
  return std::string(detail::trim(out));
}

/// Text before the first ':' or dash separator.
std::string item_head(std::string_view content) {
  std::string text = strip_markdown(content);
  std::size_t cut = text.find(':');
  for (const char* sep : {" - ", " – ", " — "}) {
    cut = std::min(cut, text.find(sep));
  }
  if (cut != std::string::npos) text.resize(cut);
  return std::string(detail::trim(text));
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> parse_block_entries(std::string_view body) {
  try {
    const json arr = json::parse(body);
    if (arr.is_array()) {
      std::vector<std::string> out;
      for (const auto& v : arr) {
        if (v.is_string()) out.push_back(v.get<std::string>());
      }
      return out;
    }
  } catch (const json::exception&) {
  }
  std::vector<std::string> out;
  std::string inner(body.substr(1, body.size() >= 2 ? body.size() - 2 : 0));
  std::istringstream in(inner);
  for (std::string part; std::getline(in, part, ',');) {
    std::string cleaned = strip_markdown(part);
    if (!cleaned.empty()) out.push_back(cleaned);
  }
  return out;
}

}  // namespace

std::vector<std::string> extract_candidate_items(std::string_view reply, std::string_view block_key) {
  static const std::regex numbered(R"(^\s*#*\s*\(?\d{1,3}[.)]\s+(.+)$)");
  static const std::regex bulleted(R"(^\s*(?:[-*+]|•)\s+(.+)$)");

  const auto lines = split_lines(reply);
  std::vector<std::string> numbered_items;
  std::vector<std::string> bullet_items;
  std::vector<std::string> block_items;
  std::vector<std::string> plain_lines;
  bool in_block = false;
  std::string block_text;

  const auto flush_block = [&] {
    const auto b = block_text.find('[');
    const auto e = block_text.rfind(']');
    if (b == std::string::npos || e == std::string::npos || e < b) return;
    auto entries = parse_block_entries(std::string_view(block_text).substr(b, e - b + 1));
    block_items.insert(block_items.end(), entries.begin(), entries.end());
  };

  for (const auto& line : lines) {
    if (in_block) {
      block_text += ' ' + line;
      if (line.find(']') != std::string::npos) {
        in_block = false;
        flush_block();
      }
      continue;
    }
    const std::string bare = strip_markdown(line);
    if (!block_key.empty() && bare.rfind(std::string(block_key) + ":", 0) == 0) {
      block_text = line.substr(line.find(':') + 1);
      if (block_text.find(']') == std::string::npos) {
        in_block = block_text.find('[') != std::string::npos || detail::trim(block_text).empty();
      } else {
        flush_block();
      }
      continue;
    }
    std::smatch m;
    if (std::regex_match(line, m, numbered)) {
      numbered_items.push_back(item_head(m[1].str()));
    } else if (std::regex_match(line, m, bulleted)) {
      bullet_items.push_back(item_head(m[1].str()));
    } else if (!detail::trim(line).empty()) {
      plain_lines.push_back(strip_markdown(line));
    }
  }

  std::vector<std::string> items = !numbered_items.empty() ? numbered_items : bullet_items;
  if (items.empty() && block_items.empty()) items = plain_lines;
  items.insert(items.end(), block_items.begin(), block_items.end());
  std::erase_if(items, [](const std::string& s) { return detail::trim(s).empty(); });
  return items;
}

std::string normalize_phrase(std::string_view item) {
  static const std::set<std::string> filler = {
      "a", "an", "the", "on", "at", "to", "in", "of", "for", "add", "adding", "install", "installing",
      "place", "placing", "put", "attach", "attaching", "mount", "new", "additional", "another",
      "sensor", "sensors", "location", "locations", "feature", "features", "and", "also"};
  std::string text = detail::to_lower(strip_markdown(item));
  while (!text.empty() && (text.back() == '.' || text.back() == ',' || text.back() == ';')) text.pop_back();
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  std::size_t begin = 0;
  std::size_t end = words.size();
  while (begin < end && filler.contains(words[begin])) ++begin;
  while (end > begin && filler.contains(words[end - 1])) --end;
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  return out;
}

const FeatureInfo& resolve_feature_name(std::string_view name) {
  std::vector<detail::NameEntry> entries;
  for (const auto& info : feature_registry()) {
    detail::NameEntry e{std::string(info.id), {}};
    for (auto alias : info.aliases) e.aliases.emplace_back(alias);
    entries.push_back(std::move(e));
  }
  return feature_registry()[detail::resolve_name(name, entries)];
}

namespace {

template <typename Resolve>
SuggestionSet parse_suggestions(std::string_view reply, SuggestionKind kind, std::string_view block_key,
                                Resolve&& resolve, std::string prompt_fingerprint) {
  SuggestionSet set;
  set.kind = kind;
  set.raw_reply = std::string(reply);
  set.prompt_fingerprint = std::move(prompt_fingerprint);
  for (const auto& item : extract_candidate_items(reply, block_key)) {
    const std::string phrase = normalize_phrase(item);
    std::optional<std::string> id;
    for (const std::string& attempt : {item, phrase}) {
      if (attempt.empty()) continue;
      try {
        id = resolve(attempt);
        break;
      } catch (const UnresolvedNameError&) {
      } catch (const AmbiguousNameError&) {
      }
    }
    if (id) {
      if (std::find(set.resolved.begin(), set.resolved.end(), *id) == set.resolved.end()) {
        set.resolved.push_back(*id);
      }
    } else if (!phrase.empty() &&
               std::find(set.unresolved.begin(), set.unresolved.end(), phrase) == set.unresolved.end()) {
      set.unresolved.push_back(phrase);
    }
  }
  return set;
}

}  // namespace

SuggestionSet parse_sensor_suggestions(std::string_view reply, const SensorCatalog& catalog,
                                       std::string prompt_fingerprint) {
  return parse_suggestions(
      reply, SuggestionKind::Sensor, "SUGGESTED_SENSORS",
      [&](const std::string& s) { return catalog.resolve(s).id; }, std::move(prompt_fingerprint));
}

SuggestionSet parse_feature_suggestions(std::string_view reply, std::string prompt_fingerprint) {
  return parse_suggestions(
      reply, SuggestionKind::Feature, "SUGGESTED_FEATURES",
      [](const std::string& s) { return std::string(resolve_feature_name(s).id); },
      std::move(prompt_fingerprint));
}

}  // namespace harpioneer
