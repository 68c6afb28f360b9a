// Regenerates the bundled LLM fixtures: a baseline report, the replay
// cassette keyed by the rendered prompts, and the golden prompt files.
// Run after editing templates or fixture replies, then review the diff.

#include <iostream>

#include "CLI11.hpp"
#include "harpioneer/experiment.hpp"
#include "harpioneer/llm_client.hpp"
#include "harpioneer/paths.hpp"
#include "harpioneer/pioneer.hpp"

using namespace harpioneer;
namespace fs = std::filesystem;

namespace {

// Authored matrix with the baseline's typical confusions between the
// static postures; roughly 74% accuracy.
ExperimentReport baseline_report(const SensorCatalog& catalog) {
  const ConfusionMatrix confusion{{
      {310, 62, 48, 0, 30},
      {70, 260, 10, 5, 25},
      {40, 8, 330, 0, 22},
      {2, 6, 0, 88, 4},
      {35, 28, 30, 3, 254},
  }};
  const ExperimentConfig config = preset_config(PresetId::A, catalog, {});
  ExperimentReport r;
  r.preset = "a";
  r.config_fingerprint = config.fingerprint();
  r.pooled = report_from_confusion(confusion);
  r.pooled.config_fingerprint = r.config_fingerprint;
  r.per_subject["S1"] = r.pooled;
  r.subject_mean_accuracy = r.pooled.accuracy;
  r.subject_mean_macro_f1 = r.pooled.macro_f1;
  r.train_windows = 4180;
  r.test_windows = r.pooled.n_windows;
  r.sensors = config.sensors;
  for (const auto& f : config.features) r.features.push_back(f.name);
  r.feature_columns = 60;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regenerate LLM fixtures and golden prompts"};
  std::string fixtures = default_fixtures_dir().string();
  std::string golden;
  app.add_option("--fixtures", fixtures)->capture_default_str();
  app.add_option("--golden", golden, "Directory for prompt_A.txt, prompt_B.txt, prompt_feat.txt")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path dir(fixtures);
    const SensorCatalog catalog = SensorCatalog::load(default_catalog_path());
    const PromptTemplates templates = PromptTemplates::load(default_templates_dir());

    const ExperimentReport report = baseline_report(catalog);
    write_file_atomic(dir / "baseline_report.json", report.to_json());

    const ExperimentConfig base = preset_config(PresetId::A, catalog, {});
    const PromptContext ctx = default_prompt_context(catalog, base.sensors, base.features, report.pooled);
    const std::string prompt_a = render_sensor_prompt(ctx, PromptVariant::A, templates);
    const std::string prompt_b = render_sensor_prompt(ctx, PromptVariant::B, templates);
    const std::string prompt_f = render_feature_prompt(ctx, templates);
    write_file_atomic(fs::path(golden) / "prompt_A.txt", prompt_a);
    write_file_atomic(fs::path(golden) / "prompt_B.txt", prompt_b);
    write_file_atomic(fs::path(golden) / "prompt_feat.txt", prompt_f);

    const std::string reply_a = read_file(dir / "reply_sensors_A.txt");
    const std::string reply_b = read_file(dir / "reply_sensors_B.txt");
    const std::string reply_f = read_file(dir / "reply_features.txt");

    const LlmConfig llm;
    const auto fp = [&](const std::vector<ChatMessage>& messages) {
      return request_fingerprint(llm.model, messages, llm.temperature);
    };
    const CassetteEntry meta{"", "fixture", "authored"};
    const auto entry = [&](const std::string& reply) {
      CassetteEntry e = meta;
      e.reply = reply;
      return e;
    };

    Cassette cassette;
    cassette.put(fp({{ChatRole::User, prompt_a}}), entry(reply_a));
    cassette.put(fp({{ChatRole::User, prompt_b}}), entry(reply_b));
    // The feature prompt follows variant B in the same conversation.
    cassette.put(fp({{ChatRole::User, prompt_b}, {ChatRole::Assistant, reply_b}, {ChatRole::User, prompt_f}}),
                 entry(reply_f));
    cassette.save(dir / "cassette.json");
    std::cout << "wrote fixtures to " << dir.string() << " and golden prompts to " << golden << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
