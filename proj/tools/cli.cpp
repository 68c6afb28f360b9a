#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "harpioneer/catalog.hpp"
#include "harpioneer/errors.hpp"
#include "harpioneer/experiment.hpp"
#include "harpioneer/hash.hpp"
#include "harpioneer/llm_client.hpp"
#include "harpioneer/paths.hpp"
#include "harpioneer/pioneer.hpp"
#include "harpioneer/reproduction.hpp"
#include "harpioneer/synth.hpp"
#include "json.hpp"

namespace harpioneer::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  json data = json::object();
  std::string text;
};

struct Globals {
  std::string format = "text";
  std::string catalog;
};

SensorCatalog load_catalog(const Globals& g) {
  return SensorCatalog::load(g.catalog.empty() ? default_catalog_path() : fs::path(g.catalog));
}

std::string pct_pair(const EvaluationReport& r) {
  return fmt::format("{:.1f}% / {:.1f}%", r.accuracy * 100.0, r.macro_f1 * 100.0);
}

json evaluation_summary(const EvaluationReport& r) {
  json per_class = json::object();
  for (ActivityLabel l : kAllLabels) per_class[std::string(label_name(l))] = r.per_class_f1[label_index(l)];
  return {{"accuracy", r.accuracy}, {"macro_f1", r.macro_f1}, {"per_class_f1", per_class}, {"n_windows", r.n_windows}};
}

std::string id_list(const std::vector<std::string>& ids) {
  return ids.empty() ? "-" : fmt::format("{}", fmt::join(ids, ", "));
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string preset;
  std::string config;
  std::string data;
  std::optional<std::uint64_t> seed;
  std::optional<int> trees;
  std::string out = "results";
};

ExperimentConfig config_from(const RunArgs& a, const SensorCatalog& catalog) {
  ExperimentConfig config;
  if (!a.config.empty()) {
    config = ExperimentConfig::load(a.config);
    if (!a.data.empty()) config.dataset_root = a.data;
  } else {
    if (a.data.empty()) throw UsageError("--preset needs --data <dataset root>");
    config = preset_config(*parse_preset(a.preset), catalog, a.data);
  }
  if (a.seed) config.seed = *a.seed;
  if (a.trees) config.classifier.n_trees = *a.trees;
  return config;
}

Output cmd_run(const RunArgs& a, const Globals& g) {
  const SensorCatalog catalog = load_catalog(g);
  const ExperimentConfig config = config_from(a, catalog);
  const ExperimentReport report = run_experiment(config, catalog);
  const ResultsStore store(a.out);
  const fs::path path = store.write(report);
  config.save(fs::path(a.out) / (report.config_fingerprint + ".config.json"));

  Output o;
  o.data = {{"report_path", path.string()},
            {"preset", report.preset},
            {"config_fingerprint", report.config_fingerprint},
            {"pooled", evaluation_summary(report.pooled)},
            {"train_windows", report.train_windows},
            {"test_windows", report.test_windows}};
  const auto id = parse_preset(report.preset);
  const std::string title = id ? fmt::format("({}) {}", report.preset, preset_title(*id)) : "custom config";
  o.text = fmt::format("{}: {}\nreport: {}\n", title, pct_pair(report.pooled), path.string());
  return o;
}

// ---------------------------------------------------------------- config

Output cmd_config(const RunArgs& a, const Globals& g) {
  const SensorCatalog catalog = load_catalog(g);
  ExperimentConfig config = preset_config(*parse_preset(a.preset), catalog, a.data);
  if (a.seed) config.seed = *a.seed;
  if (a.trees) config.classifier.n_trees = *a.trees;
  config.save(a.out);
  Output o;
  o.data = {{"config_path", a.out}, {"config_fingerprint", config.fingerprint()}};
  o.text = fmt::format("config: {}\n", a.out);
  return o;
}

// ---------------------------------------------------------------- pioneer

struct PioneerArgs {
  std::string kind = "sensors";
  std::string variant;
  std::string from_report;
  std::string config;
  std::string mode = "replay";
  std::string cassette;
  std::string out = "suggestions";
  std::string model = LlmConfig{}.model;
  std::string base_url = LlmConfig{}.base_url;
  double temperature = 0.0;
  int timeout_s = 120;
  int retries = 0;
};

Output cmd_pioneer(PioneerArgs a, const Globals& g) {
  const bool features = a.kind == "features";
  if (a.variant.empty()) a.variant = features ? "B" : "A";
  const PromptVariant variant = a.variant == "A" ? PromptVariant::A : PromptVariant::B;
  if (variant == PromptVariant::B && a.from_report.empty()) {
    throw UsageError("variant B needs --from-report <report.json> for the \"Current result\" section");
  }

  const SensorCatalog catalog = load_catalog(g);
  const ExperimentConfig base =
      a.config.empty() ? preset_config(PresetId::A, catalog, {}) : ExperimentConfig::load(a.config);
  std::optional<EvaluationReport> evaluation;
  if (!a.from_report.empty()) evaluation = ExperimentReport::load(a.from_report).pooled;
  const PromptContext ctx = default_prompt_context(catalog, base.sensors, base.features, evaluation);
  const PromptTemplates templates = PromptTemplates::load(default_templates_dir());

  LlmConfig lc;
  lc.mode = *parse_llm_mode(a.mode);
  lc.cassette_path = a.cassette.empty() ? default_fixtures_dir() / "cassette.json" : fs::path(a.cassette);
  lc.model = a.model;
  lc.base_url = a.base_url;
  lc.temperature = a.temperature;
  lc.timeout_s = a.timeout_s;
  lc.retries = a.retries;
  LlmClient client(lc, lc.mode == LlmMode::Replay ? nullptr : make_http_transport());

  // The feature prompt continues the sensor-pioneering conversation.
  ChatSession session = client.new_session();
  std::string prompt = render_sensor_prompt(ctx, variant, templates);
  std::string reply = client.complete(session, prompt);
  if (features) {
    prompt = render_feature_prompt(ctx, templates);
    reply = client.complete(session, prompt);
  }
  const std::string prompt_fp = fingerprint_hex(prompt);
  const SuggestionSet set = features ? parse_feature_suggestions(reply, prompt_fp)
                                     : parse_sensor_suggestions(reply, catalog, prompt_fp);

  const fs::path out(a.out);
  fs::create_directories(out);
  write_file_atomic(out / (a.kind + "_prompt.txt"), prompt);
  write_file_atomic(out / (a.kind + "_reply.txt"), reply);
  const fs::path set_path = out / (a.kind + "_suggestions.json");
  set.save(set_path);

  Output o;
  o.data = {{"kind", a.kind},       {"variant", a.variant},        {"suggestions_path", set_path.string()},
            {"resolved", set.resolved}, {"unresolved", set.unresolved}, {"prompt_fingerprint", prompt_fp}};
  o.text = fmt::format("resolved ({}): {}\nunresolved ({}): {}\nsuggestions: {}\n", set.resolved.size(),
                       id_list(set.resolved), set.unresolved.size(), id_list(set.unresolved), set_path.string());
  return o;
}

// ---------------------------------------------------------------- apply

struct ApplyArgs {
  std::string config;
  std::string suggestions;
  std::string out;
  bool replace = false;
};

Output cmd_apply(const ApplyArgs& a) {
  const ExperimentConfig config = ExperimentConfig::load(a.config);
  const SuggestionSet set = SuggestionSet::load(a.suggestions);
  const ExperimentConfig next = apply_suggestions(config, set, a.replace ? ApplyMode::Replace : ApplyMode::Union);
  next.save(a.out);

  std::vector<std::string> feature_names;
  for (const auto& f : next.features) feature_names.push_back(f.name);
  Output o;
  o.data = {{"config_path", a.out},
            {"config_fingerprint", next.fingerprint()},
            {"sensors", next.sensors},
            {"features", feature_names}};
  o.text = fmt::format("sensors ({}): {}\nfeatures ({}): {}\nconfig: {}\n", next.sensors.size(),
                       id_list(next.sensors), feature_names.size(), id_list(feature_names), a.out);
  return o;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  SynthOptions options;
  std::string out;
};

Output cmd_synth(const SynthArgs& a, const Globals& g) {
  const SensorCatalog catalog = load_catalog(g);
  const auto files = synthesize_dataset(a.out, a.options, catalog);
  Output o;
  json list = json::array();
  for (const auto& f : files) {
    list.push_back(f.string());
    o.text += f.string() + "\n";
  }
  o.data = {{"dataset_root", a.out}, {"files", list}, {"seed", a.options.seed}};
  return o;
}

// ---------------------------------------------------------------- report

std::string confusion_table(const EvaluationReport& r) {
  std::string out = fmt::format("{:<16}", "truth \\ pred");
  for (ActivityLabel l : kAllLabels) out += fmt::format("{:>8}", label_name(l));
  out += '\n';
  for (ActivityLabel t : kAllLabels) {
    out += fmt::format("{:<16}", label_name(t));
    for (ActivityLabel p : kAllLabels) out += fmt::format("{:>8}", r.confusion[label_index(t)][label_index(p)]);
    out += '\n';
  }
  return out;
}

Output cmd_report(const std::string& path) {
  const ExperimentReport report = ExperimentReport::load(path);
  Output o;
  o.data = json::parse(report.to_json());
  const auto id = parse_preset(report.preset);
  o.text = fmt::format("preset: {}\nconfig: {}\nsensors ({}): {}\nfeatures ({}): {} -> {} columns\n",
                       id ? fmt::format("({}) {}", report.preset, preset_title(*id)) : std::string("custom"),
                       report.config_fingerprint, report.sensors.size(), id_list(report.sensors),
                       report.features.size(), id_list(report.features), report.feature_columns);
  o.text += fmt::format("windows: {} train, {} test\n\n", report.train_windows, report.test_windows);
  o.text += fmt::format("accuracy / macro F1: {}\n", pct_pair(report.pooled));
  for (ActivityLabel l : kAllLabels) {
    const std::size_t i = label_index(l);
    o.text += fmt::format("  F1 {:<8}{}\n", label_name(l),
                          report.pooled.class_present[i] ? fmt::format("{:.1f}%", report.pooled.per_class_f1[i] * 100.0)
                                                         : std::string("n/a"));
  }
  o.text += '\n' + confusion_table(report.pooled);
  if (!report.per_subject.empty()) {
    o.text += "\nper subject:\n";
    for (const auto& [subject, r] : report.per_subject) o.text += fmt::format("  {:<8}{}\n", subject, pct_pair(r));
    o.text += fmt::format("  {:<8}{:.1f}% / {:.1f}%\n", "mean", report.subject_mean_accuracy * 100.0,
                          report.subject_mean_macro_f1 * 100.0);
  }
  return o;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs {
  std::string data;
  std::string presets = "abcdef";
  std::optional<std::uint64_t> seed;
  std::optional<int> trees;
  std::string out = "results";
};

Output cmd_reproduce(const ReproduceArgs& a, const Globals& g) {
  const SensorCatalog catalog = load_catalog(g);
  const ResultsStore store(a.out);
  std::map<PresetId, ExperimentReport> measured;
  json paths = json::object();
  for (char c : a.presets) {
    const auto id = parse_preset(std::string(1, c));
    if (!id) throw UsageError(fmt::format("unknown preset '{}' in --presets", c));
    ExperimentConfig config = preset_config(*id, catalog, a.data);
    if (a.seed) config.seed = *a.seed;
    if (a.trees) config.classifier.n_trees = *a.trees;
    ExperimentReport report = run_experiment(config, catalog);
    paths[std::string(1, c)] = store.write(report).string();
    measured[*id] = std::move(report);
  }
  const ReproductionReport rep = compare_with_published(measured);
  Output o;
  o.data = json::parse(rep.to_json());
  o.data["report_paths"] = paths;
  o.text = rep.to_table();
  return o;
}

bool wants_json(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--format=json") return true;
    if (args[i] == "--format" && i + 1 < args.size() && args[i + 1] == "json") return true;
  }
  return false;
}

int fail(std::ostream& out, std::ostream& err, bool json_out, int code, const std::string& kind,
         const std::string& message) {
  err << "error: " << message << '\n';
  if (json_out) out << json{{"ok", false}, {"exit_code", code}, {"error", kind}, {"message", message}}.dump(2) << '\n';
  return code;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const StageError*>(&e)) return "stage";
  if (dynamic_cast<const DatasetError*>(&e)) return "dataset";
  if (dynamic_cast<const CassetteMissError*>(&e)) return "cassette_miss";
  if (dynamic_cast<const TimeoutError*>(&e)) return "timeout";
  if (dynamic_cast<const TransportError*>(&e)) return "transport";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "io";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sensor and feature pioneering for activity recognition experiments", "harpioneer"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--catalog", g.catalog, "Sensor catalog JSON (default: bundled catalog)");

  const auto presets = CLI::IsMember({"a", "b", "c", "d", "e", "f"});

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run an experiment preset or config and store its report");
  auto* run_preset = run->add_option("--preset", run_args.preset, "Preset a-f")->check(presets);
  auto* run_config = run->add_option("--config", run_args.config, "Experiment config JSON")->check(CLI::ExistingFile);
  run_preset->excludes(run_config);
  run->add_option("--data", run_args.data, "Dataset root directory");
  run->add_option("--seed", run_args.seed, "Random seed");
  run->add_option("--trees", run_args.trees, "Number of trees")->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out, "Results directory")->capture_default_str();

  RunArgs config_args;
  auto* config = app.add_subcommand("config", "Write the config of a preset");
  config->add_option("--preset", config_args.preset, "Preset a-f")->required()->check(presets);
  config->add_option("--data", config_args.data, "Dataset root directory");
  config->add_option("--seed", config_args.seed, "Random seed");
  config->add_option("--trees", config_args.trees, "Number of trees")->check(CLI::PositiveNumber);
  config->add_option("--out", config_args.out, "Config file to write")->required();

  PioneerArgs pio_args;
  auto* pioneer = app.add_subcommand("pioneer", "Ask the LLM for new sensor locations or features");
  pioneer->add_option("--kind", pio_args.kind)->check(CLI::IsMember({"sensors", "features"}))->capture_default_str();
  pioneer->add_option("--variant", pio_args.variant, "A (no result) or B (with result)")
      ->check(CLI::IsMember({"A", "B"}));
  pioneer->add_option("--from-report", pio_args.from_report, "Report providing the current result")
      ->check(CLI::ExistingFile);
  pioneer->add_option("--config", pio_args.config, "Current config (default: preset a)")->check(CLI::ExistingFile);
  pioneer->add_option("--mode", pio_args.mode)->check(CLI::IsMember({"live", "record", "replay"}))->capture_default_str();
  pioneer->add_option("--cassette", pio_args.cassette, "Cassette file (default: bundled fixture)");
  pioneer->add_option("--out", pio_args.out, "Output directory")->capture_default_str();
  pioneer->add_option("--model", pio_args.model)->capture_default_str();
  pioneer->add_option("--base-url", pio_args.base_url)->capture_default_str();
  pioneer->add_option("--temperature", pio_args.temperature)->capture_default_str();
  pioneer->add_option("--timeout-s", pio_args.timeout_s)->check(CLI::PositiveNumber)->capture_default_str();
  pioneer->add_option("--retries", pio_args.retries)->check(CLI::Range(0, 1))->capture_default_str();

  ApplyArgs apply_args;
  auto* apply = app.add_subcommand("apply", "Merge a reviewed suggestion set into a config");
  apply->add_option("--config", apply_args.config)->required()->check(CLI::ExistingFile);
  apply->add_option("--suggestions", apply_args.suggestions)->required()->check(CLI::ExistingFile);
  apply->add_option("--out", apply_args.out)->required();
  apply->add_flag("--replace", apply_args.replace, "Use exactly the suggested set instead of the union");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset in the Opportunity file format");
  synth->add_option("--out", synth_args.out)->required();
  synth->add_option("--seed", synth_args.options.seed)->capture_default_str();
  synth->add_option("--duration-s", synth_args.options.duration_s)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--subjects", synth_args.options.n_subjects)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--nan-rate", synth_args.options.nan_rate)->check(CLI::Range(0.0, 0.5))->capture_default_str();
  synth->add_option("--runs", synth_args.options.runs)->capture_default_str();

  std::string report_path;
  auto* report = app.add_subcommand("report", "Pretty-print a stored report");
  report->add_option("path", report_path)->required()->check(CLI::ExistingFile);

  ReproduceArgs rep_args;
  auto* reproduce = app.add_subcommand("reproduce", "Run presets and compare with the published table");
  reproduce->add_option("--data", rep_args.data)->required();
  reproduce->add_option("--presets", rep_args.presets)->capture_default_str();
  reproduce->add_option("--seed", rep_args.seed);
  reproduce->add_option("--trees", rep_args.trees)->check(CLI::PositiveNumber);
  reproduce->add_option("--out", rep_args.out)->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  const bool json_hint = wants_json(args);
  std::vector<std::string> argv_store{"harpioneer"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(out, err, json_hint, kExitUsage, "usage", e.what());
  }

  const bool json_out = g.format == "json";
  try {
    if (run->parsed() && run_args.preset.empty() && run_args.config.empty()) {
      throw UsageError("run needs --preset or --config");
    }
    Output o;
    if (run->parsed()) o = cmd_run(run_args, g);
    else if (config->parsed()) o = cmd_config(config_args, g);
    else if (pioneer->parsed()) o = cmd_pioneer(pio_args, g);
    else if (apply->parsed()) o = cmd_apply(apply_args);
    else if (synth->parsed()) o = cmd_synth(synth_args, g);
    else if (report->parsed()) o = cmd_report(report_path);
    else o = cmd_reproduce(rep_args, g);

    if (json_out) {
      o.data["ok"] = true;
      out << o.data.dump(2) << '\n';
    } else {
      out << o.text;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    return fail(out, err, json_out, kExitUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(out, err, json_out, kExitFailure, error_kind(e), e.what());
  }
}

}  // namespace harpioneer::cli
