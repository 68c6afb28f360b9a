#include "harpioneer/experiment.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/hash.hpp"
#include "harpioneer/ingest.hpp"
#include "harpioneer/paths.hpp"
#include "harpioneer/windowing.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace harpioneer {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- config

namespace {

json specs_to_json(const std::vector<FeatureSpec>& specs) {
  json arr = json::array();
  for (const auto& s : specs) {
    json params = json::object();
    for (const auto& [k, v] : s.params) params[k] = v;
    arr.push_back({{"name", s.name}, {"params", params}});
  }
  return arr;
}

std::vector<FeatureSpec> specs_from_json(const json& arr) {
  std::vector<FeatureSpec> specs;
  for (const auto& item : arr) {
    FeatureSpec spec;
    if (item.is_string()) {
      spec = FeatureSpec::make(item.get<std::string>());
    } else {
      spec = FeatureSpec::make(item.at("name").get<std::string>());
      const json params = item.value("params", json::object());
      for (const auto& [k, v] : params.items()) spec.params[k] = v.get<double>();
    }
    spec.validate();
    specs.push_back(std::move(spec));
  }
  return specs;
}

json config_json(const ExperimentConfig& c) {
  return json{
      {"preset", c.preset},
      {"dataset_root", c.dataset_root.string()},
      {"subject_globs", c.subject_globs},
      {"run_globs", c.run_globs},
      {"sensors", c.sensors},
      {"features", specs_to_json(c.features)},
      {"window_s", c.window_s},
      {"overlap_frac", c.overlap_frac},
      {"sample_rate_hz", c.sample_rate_hz},
      {"classifier",
       {{"n_trees", c.classifier.n_trees},
        {"max_depth", c.classifier.max_depth},
        {"max_features", c.classifier.max_features},
        {"min_samples_split", c.classifier.min_samples_split},
        {"bootstrap", c.classifier.bootstrap},
        {"balance_classes", c.classifier.balance_classes}}},
      {"seed", c.seed},
      {"split", {{"train_runs", c.split.train_runs}, {"test_runs", c.split.test_runs}}},
      {"drop_others", c.drop_others},
      {"provenance", c.provenance},
  };
}

}  // namespace

std::string ExperimentConfig::to_json() const { return config_json(*this).dump(2) + "\n"; }

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    ExperimentConfig c;
    c.preset = doc.value("preset", std::string{});
    c.dataset_root = doc.value("dataset_root", std::string{});
    c.subject_globs = doc.value("subject_globs", c.subject_globs);
    c.run_globs = doc.value("run_globs", c.run_globs);
    c.sensors = doc.at("sensors").get<std::vector<std::string>>();
    c.features = specs_from_json(doc.at("features"));
    c.window_s = doc.value("window_s", c.window_s);
    c.overlap_frac = doc.value("overlap_frac", c.overlap_frac);
    c.sample_rate_hz = doc.value("sample_rate_hz", c.sample_rate_hz);
    if (doc.contains("classifier")) {
      const auto& k = doc.at("classifier");
      c.classifier.n_trees = k.value("n_trees", c.classifier.n_trees);
      c.classifier.max_depth = k.value("max_depth", c.classifier.max_depth);
      c.classifier.max_features = k.value("max_features", c.classifier.max_features);
      c.classifier.min_samples_split = k.value("min_samples_split", c.classifier.min_samples_split);
      c.classifier.bootstrap = k.value("bootstrap", c.classifier.bootstrap);
      c.classifier.balance_classes = k.value("balance_classes", c.classifier.balance_classes);
    }
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("split")) {
      c.split.train_runs = doc.at("split").value("train_runs", c.split.train_runs);
      c.split.test_runs = doc.at("split").value("test_runs", c.split.test_runs);
    }
    c.drop_others = doc.value("drop_others", c.drop_others);
    c.provenance = doc.value("provenance", c.provenance);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("invalid experiment config: {}", e.what()));
  }
}

std::string ExperimentConfig::fingerprint() const { return fingerprint_hex(config_json(*this).dump()); }

void ExperimentConfig::save(const fs::path& path) const { write_file_atomic(path, to_json()); }

ExperimentConfig ExperimentConfig::load(const fs::path& path) { return from_json(read_file(path)); }

// ---------------------------------------------------------------- presets

std::optional<PresetId> parse_preset(std::string_view text) noexcept {
  if (text.size() != 1) return std::nullopt;
  switch (text[0]) {
    case 'a': return PresetId::A;
    case 'b': return PresetId::B;
    case 'c': return PresetId::C;
    case 'd': return PresetId::D;
    case 'e': return PresetId::E;
    case 'f': return PresetId::F;
    default: return std::nullopt;
  }
}

std::string_view preset_letter(PresetId id) noexcept {
  constexpr std::string_view letters[] = {"a", "b", "c", "d", "e", "f"};
  return letters[static_cast<int>(id)];
}

std::string_view preset_title(PresetId id) noexcept {
  switch (id) {
    case PresetId::A: return "Baseline";
    case PresetId::B: return "All sensors";
    case PresetId::C: return "All sensors + Feature Augmentation";
    case PresetId::D: return "Sensor Pioneering A + Feature Augmentation";
    case PresetId::E: return "Sensor Pioneering B";
    case PresetId::F: return "Sensor Pioneering B + Feature Augmentation";
  }
  return "";
}

std::vector<std::string> baseline_sensor_ids() { return {"RUA^", "LUA^", "RUA_", "LUA_"}; }

std::vector<std::string> pioneering_a_sensor_ids() {
  return {"R-SHOE", "L-SHOE", "RWR", "LWR", "RUA_", "RUA^", "LUA_", "LUA^", "HIP"};
}

std::vector<std::string> pioneering_b_sensor_ids() {
  return {"R-SHOE", "L-SHOE", "RLA", "LLA", "BACK", "RUA", "LUA", "RWR", "LWR", "HIP"};
}

ExperimentConfig preset_config(PresetId id, const SensorCatalog& catalog, const fs::path& dataset_root) {
  ExperimentConfig c;
  c.preset = std::string(preset_letter(id));
  c.dataset_root = dataset_root;
  c.sample_rate_hz = catalog.sample_rate_hz();
  switch (id) {
    case PresetId::A: c.sensors = baseline_sensor_ids(); break;
    case PresetId::B:
    case PresetId::C: c.sensors = catalog.ids(); break;
    case PresetId::D: c.sensors = pioneering_a_sensor_ids(); break;
    case PresetId::E:
    case PresetId::F: c.sensors = pioneering_b_sensor_ids(); break;
  }
  const bool augmented = id == PresetId::C || id == PresetId::D || id == PresetId::F;
  c.features = augmented ? full_feature_specs() : baseline_feature_specs();
  for (const auto& s : c.sensors) catalog.at(s);
  return c;
}

// ---------------------------------------------------------------- report

namespace {

json evaluation_json(const EvaluationReport& r) {
  json per_class = json::object();
  json present = json::array();
  for (ActivityLabel l : kAllLabels) {
    per_class[std::string(label_name(l))] = r.per_class_f1[label_index(l)];
    if (r.class_present[label_index(l)]) present.push_back(label_name(l));
  }
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  return json{{"accuracy", r.accuracy},     {"macro_f1", r.macro_f1},       {"per_class_f1", per_class},
              {"confusion", confusion},     {"n_windows", r.n_windows},     {"classes_present", present}};
}

EvaluationReport evaluation_from_json(const json& j) {
  ConfusionMatrix confusion{};
  const auto& rows = j.at("confusion");
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    for (std::size_t p = 0; p < kNumClasses; ++p) confusion[t][p] = rows.at(t).at(p).get<std::uint64_t>();
  }
  return report_from_confusion(confusion);
}

}  // namespace

std::string ExperimentReport::to_json() const {
  json label_order = json::array();
  for (ActivityLabel l : kAllLabels) label_order.push_back(label_name(l));
  json subjects = json::object();
  for (const auto& [subject, r] : per_subject) subjects[subject] = evaluation_json(r);
  json doc{
      {"format", "harpioneer-report"},
      {"version", 1},
      {"preset", preset},
      {"config_fingerprint", config_fingerprint},
      {"class_order", label_order},
      {"f1_average", "macro"},
      {"pooled", evaluation_json(pooled)},
      {"per_subject", subjects},
      {"subject_mean", {{"accuracy", subject_mean_accuracy}, {"macro_f1", subject_mean_macro_f1}}},
      {"train_windows", train_windows},
      {"test_windows", test_windows},
      {"sensors", sensors},
      {"features", features},
      {"feature_columns", feature_columns},
  };
  return doc.dump(2) + "\n";
}

ExperimentReport ExperimentReport::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "harpioneer-report") throw ConfigError("not a harpioneer report");
    ExperimentReport r;
    r.preset = doc.at("preset").get<std::string>();
    r.config_fingerprint = doc.at("config_fingerprint").get<std::string>();
    r.pooled = evaluation_from_json(doc.at("pooled"));
    r.pooled.config_fingerprint = r.config_fingerprint;
    for (const auto& [subject, j] : doc.at("per_subject").items()) r.per_subject[subject] = evaluation_from_json(j);
    r.subject_mean_accuracy = doc.at("subject_mean").at("accuracy").get<double>();
    r.subject_mean_macro_f1 = doc.at("subject_mean").at("macro_f1").get<double>();
    r.train_windows = doc.at("train_windows").get<std::uint64_t>();
    r.test_windows = doc.at("test_windows").get<std::uint64_t>();
    r.sensors = doc.at("sensors").get<std::vector<std::string>>();
    r.features = doc.at("features").get<std::vector<std::string>>();
    r.feature_columns = doc.at("feature_columns").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("invalid report: {}", e.what()));
  }
}

ExperimentReport ExperimentReport::load(const fs::path& path) { return from_json(read_file(path)); }

// ---------------------------------------------------------------- pipeline

std::vector<fs::path> find_dataset_files(const ExperimentConfig& config) {
  std::error_code ec;
  if (config.dataset_root.empty() || !fs::is_directory(config.dataset_root, ec)) {
    throw DatasetError(fmt::format("dataset root '{}' is not a directory", config.dataset_root.string()));
  }
  const auto matches = [](const std::vector<std::string>& globs, const std::string& s) {
    return std::any_of(globs.begin(), globs.end(), [&](const auto& g) { return glob_match(g, s); });
  };
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config.dataset_root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".dat") continue;
    const Provenance p = provenance_from_path(entry.path());
    if (matches(config.subject_globs, p.subject) && matches(config.run_globs, p.run)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw DatasetError(fmt::format("no dataset files under '{}' match the subject/run globs",
                                   config.dataset_root.string()));
  }
  return files;
}

namespace {

template <typename Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

struct WindowSet {
  std::vector<Window> windows;
  std::vector<ActivityLabel> labels;
};

WindowSet windows_of(const std::vector<std::shared_ptr<const Recording>>& recordings,
                     const ExperimentConfig& config) {
  WindowSet set;
  const SegmentParams params{config.window_s, config.overlap_frac};
  for (const auto& rec : recordings) {
    for (auto& w : segment(rec, params)) {
      if (config.drop_others && w.label == ActivityLabel::Others) continue;
      set.labels.push_back(w.label);
      set.windows.push_back(std::move(w));
    }
  }
  return set;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const SensorCatalog& catalog) {
  staged("config", [&] {
    if (config.sensors.empty()) throw ConfigError("config lists no sensors");
    if (config.features.empty()) throw ConfigError("config lists no features");
    for (const auto& s : config.sensors) catalog.at(s);
    for (const auto& f : config.features) f.validate();
    return 0;
  });
  const auto files = staged("dataset", [&] { return find_dataset_files(config); });

  const auto recordings = staged("ingest", [&] {
    std::vector<std::shared_ptr<const Recording>> recs(files.size());
    LoadOptions options;
    options.sample_rate_hz = config.sample_rate_hz;
    detail::parallel_for(files.size(), [&](std::size_t i) {
      recs[i] = std::make_shared<const Recording>(load_recording(files[i], config.sensors, catalog, options));
    });
    return recs;
  });

  const auto split = staged("split", [&] { return split_train_test(recordings, config.split); });
  const auto train_set = staged("window", [&] { return windows_of(split.train, config); });
  const auto test_set = staged("window", [&] { return windows_of(split.test, config); });
  if (test_set.windows.empty()) throw StageError("window", "test split produced no windows");

  const auto train_x = staged("featurize", [&] { return featurize_windows(train_set.windows, config.features); });
  const auto test_x = staged("featurize", [&] { return featurize_windows(test_set.windows, config.features); });

  const auto model = staged("train", [&] {
    return TrainedModel::train(train_x, train_set.labels, config.classifier, config.seed);
  });
  const auto predicted = staged("predict", [&] { return model.predict(test_x); });

  ExperimentReport report;
  report.preset = config.preset;
  report.config_fingerprint = config.fingerprint();
  report.pooled = evaluate(predicted, test_set.labels);
  report.pooled.config_fingerprint = report.config_fingerprint;

  std::map<std::string, std::pair<std::vector<ActivityLabel>, std::vector<ActivityLabel>>> by_subject;
  for (std::size_t i = 0; i < test_set.windows.size(); ++i) {
    auto& entry = by_subject[test_set.windows[i].recording->provenance.subject];
    entry.first.push_back(predicted[i]);
    entry.second.push_back(test_set.labels[i]);
  }
  for (const auto& [subject, pt] : by_subject) {
    EvaluationReport r = evaluate(pt.first, pt.second);
    r.config_fingerprint = report.config_fingerprint;
    report.subject_mean_accuracy += r.accuracy;
    report.subject_mean_macro_f1 += r.macro_f1;
    report.per_subject[subject] = std::move(r);
  }
  report.subject_mean_accuracy /= static_cast<double>(by_subject.size());
  report.subject_mean_macro_f1 /= static_cast<double>(by_subject.size());

  report.train_windows = train_set.windows.size();
  report.test_windows = test_set.windows.size();
  report.sensors = config.sensors;
  for (const auto& f : config.features) report.features.push_back(f.name);
  report.feature_columns = train_x.cols();
  return report;
}

// ---------------------------------------------------------------- store

ResultsStore::ResultsStore(fs::path dir) : dir_(std::move(dir)) {}

fs::path ResultsStore::path_for(const std::string& fingerprint) const { return dir_ / (fingerprint + ".json"); }

fs::path ResultsStore::write(const ExperimentReport& report) const {
  static std::mutex index_mutex;
  const fs::path path = path_for(report.config_fingerprint);
  write_file_atomic(path, report.to_json());

  std::lock_guard lock(index_mutex);
  const fs::path index_path = dir_ / "index.json";
  json index = json{{"format", "harpioneer-results-index"}, {"reports", json::object()}};
  if (fs::exists(index_path)) {
    try {
      index = json::parse(read_file(index_path));
    } catch (const json::exception&) {
      // A corrupt index is rebuilt from this entry onward.
    }
  }
  index["reports"][report.config_fingerprint] = {{"preset", report.preset},
                                                 {"file", path.filename().string()},
                                                 {"accuracy", report.pooled.accuracy},
                                                 {"macro_f1", report.pooled.macro_f1}};
  write_file_atomic(index_path, index.dump(2) + "\n");
  return path;
}

// ---------------------------------------------------------------- apply

ExperimentConfig apply_suggestions(const ExperimentConfig& config, const SuggestionSet& suggestions,
                                   ApplyMode mode) {
  if (suggestions.resolved.empty()) throw ConfigError("suggestion set has no resolved entries to apply");
  ExperimentConfig out = config;

  if (suggestions.kind == SuggestionKind::Sensor) {
    std::vector<std::string> sensors = mode == ApplyMode::Replace ? std::vector<std::string>{} : config.sensors;
    for (const auto& id : suggestions.resolved) {
      if (std::find(sensors.begin(), sensors.end(), id) == sensors.end()) sensors.push_back(id);
    }
    out.sensors = std::move(sensors);
  } else {
    std::vector<FeatureSpec> specs = mode == ApplyMode::Replace ? std::vector<FeatureSpec>{} : config.features;
    for (const auto& name : suggestions.resolved) {
      const bool present =
          std::any_of(specs.begin(), specs.end(), [&](const FeatureSpec& s) { return s.name == name; });
      if (!present) specs.push_back(FeatureSpec::make(name));
    }
    out.features = std::move(specs);
  }
  if (out.sensors != config.sensors || out.features != config.features) out.preset.clear();

  const std::string note = fmt::format("applied {} suggestions {}",
                                       suggestions.kind == SuggestionKind::Sensor ? "sensor" : "feature",
                                       fingerprint_hex(suggestions.to_json()));
  if (std::find(out.provenance.begin(), out.provenance.end(), note) == out.provenance.end()) {
    out.provenance.push_back(note);
  }
  return out;
}

}  // namespace harpioneer
