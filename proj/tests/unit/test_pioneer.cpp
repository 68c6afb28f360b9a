#include <random>
#include <regex>
#include <set>

#include <gtest/gtest.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/experiment.hpp"
#include "harpioneer/paths.hpp"
#include "harpioneer/pioneer.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace harpioneer;

namespace {

const SensorCatalog& catalog() {
  static const SensorCatalog c = SensorCatalog::load(default_catalog_path());
  return c;
}

const PromptTemplates& templates() {
  static const PromptTemplates t = PromptTemplates::load(default_templates_dir());
  return t;
}

EvaluationReport fixture_evaluation() {
  return ExperimentReport::load(default_fixtures_dir() / "baseline_report.json").pooled;
}

PromptContext baseline_ctx(std::optional<EvaluationReport> eval = std::nullopt) {
  const auto specs = baseline_feature_specs();
  return default_prompt_context(catalog(), baseline_sensor_ids(), specs, std::move(eval));
}

std::string golden(const std::string& name) { return testutil::read_text(std::string(HARPIONEER_TEST_GOLDEN "/") + name); }

std::vector<std::string> headers(const std::string& text) {
  std::vector<std::string> out;
  static const std::regex header("^## (.+)$", std::regex::multiline);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), header); it != std::sregex_iterator(); ++it) {
    out.push_back((*it)[1]);
  }
  return out;
}

std::string fixture_reply(const std::string& name) { return read_file(default_fixtures_dir() / name); }

}  // namespace

TEST(Prompts, GoldenFilesByteExact) {
  const auto ctx = baseline_ctx(fixture_evaluation());
  EXPECT_EQ(render_sensor_prompt(ctx, PromptVariant::A, templates()), golden("prompt_A.txt"));
  EXPECT_EQ(render_sensor_prompt(ctx, PromptVariant::B, templates()), golden("prompt_B.txt"));
  EXPECT_EQ(render_feature_prompt(ctx, templates()), golden("prompt_feat.txt"));
  EXPECT_EQ(render_sensor_prompt(baseline_ctx(), PromptVariant::A, templates()), golden("prompt_A.txt"));
}

TEST(Prompts, SectionStructure) {
  const auto ctx = baseline_ctx(fixture_evaluation());
  const std::vector<std::string> a{"Your role", "The problem you need to solve", "Output activity labels",
                                   "Current features", "Your task"};
  std::vector<std::string> b = a;
  b.insert(b.begin() + 4, "Current result");
  EXPECT_EQ(headers(render_sensor_prompt(ctx, PromptVariant::A, templates())), a);
  EXPECT_EQ(headers(render_sensor_prompt(ctx, PromptVariant::B, templates())), b);
  EXPECT_EQ(headers(render_feature_prompt(ctx, templates())),
            (std::vector<std::string>{"The problem you need to solve", "Output activity labels",
                                      "Current computed features", "Your task"}));
}

TEST(Prompts, VariantsDifferOnlyByCurrentResult) {
  const auto ctx = baseline_ctx(fixture_evaluation());
  const std::string a = render_sensor_prompt(ctx, PromptVariant::A, templates());
  const std::string b = render_sensor_prompt(ctx, PromptVariant::B, templates());
  const auto start = b.find("## Current result");
  const auto end = b.find("## Your task");
  ASSERT_NE(start, std::string::npos);
  EXPECT_EQ(b.substr(0, start) + b.substr(end), a);
  EXPECT_NE(b.find(summarize_confusions(*ctx.evaluation)), std::string::npos);
}

TEST(Prompts, ContentAndErrors) {
  const auto ctx = baseline_ctx();
  const std::string a = render_sensor_prompt(ctx, PromptVariant::A, templates());
  for (const char* label : {"Stand", "Sit", "Walk", "Lie", "Others"}) EXPECT_NE(a.find(label), std::string::npos);
  EXPECT_NE(a.find("right upper arm, lower position near the elbow"), std::string::npos);
  EXPECT_EQ(render_sensor_prompt(ctx, PromptVariant::A, templates()), a);

  EXPECT_THROW(render_sensor_prompt(ctx, PromptVariant::B, templates()), PromptError);
  PromptContext no_sensors = ctx;
  no_sensors.current_sensors.clear();
  EXPECT_THROW(render_sensor_prompt(no_sensors, PromptVariant::A, templates()), PromptError);
  PromptContext no_features = ctx;
  no_features.current_features.clear();
  EXPECT_THROW(render_feature_prompt(no_features, templates()), PromptError);
  PromptContext bad_labels = ctx;
  bad_labels.label_names.pop_back();
  EXPECT_THROW(render_sensor_prompt(bad_labels, PromptVariant::A, templates()), PromptError);
}

TEST(Prompts, AllFifteenFeatureNamesAppear) {
  const auto specs = full_feature_specs();
  const auto ctx = default_prompt_context(catalog(), baseline_sensor_ids(), specs, std::nullopt);
  const std::string text = render_feature_prompt(ctx, templates());
  const auto section = text.substr(text.find("## Current computed features"));
  for (const auto& info : feature_registry()) {
    EXPECT_NE(section.find(std::string(info.display_name)), std::string::npos) << info.display_name;
  }
}

TEST(Prompts, LabelDescriptionsAreOptional) {
  auto ctx = baseline_ctx();
  ctx.label_descriptions["Others"] = "any other posture or transition";
  const std::string text = render_sensor_prompt(ctx, PromptVariant::A, templates());
  EXPECT_NE(text.find("- Others: any other posture or transition"), std::string::npos);
}

TEST(Templates, EngineFeatures) {
  const auto t = PromptTemplates::from_map({
      {"main", "A {{x}}\n{{#opt}}\nopt={{opt}}\n{{/opt}}\n{{>part}}\nend\n"},
      {"part", "part {{x}}\n"},
      {"bad", "{{missing}}"},
      {"open", "{{#opt}}never closed"},
  });
  EXPECT_EQ(t.render("main", {{"x", "1"}, {"opt", ""}}), "A 1\npart 1\nend\n");
  EXPECT_EQ(t.render("main", {{"x", "1"}, {"opt", "y"}}), "A 1\nopt=y\npart 1\nend\n");
  EXPECT_THROW(t.render("bad", {}), PromptError);
  EXPECT_THROW(t.render("open", {{"opt", "1"}}), PromptError);
  EXPECT_THROW(t.render("nope", {}), PromptError);
  EXPECT_THROW(PromptTemplates::load("/nonexistent/dir"), PromptError);
}

TEST(Summarize, DiagonalOnly) {
  const ConfusionMatrix c{{{5, 0, 0, 0, 0}, {0, 3, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}};
  const std::string s = summarize_confusions(report_from_confusion(c));
  EXPECT_EQ(s, "Overall accuracy: 100.0%, macro F1-score: 100.0% on 8 test windows.\nNo frequent misclassifications.");
}

TEST(Summarize, OrderForcedByCounts) {
  ConfusionMatrix c{};
  c[0][0] = 100;
  c[1][1] = 60;
  c[1][0] = 40;  // Sit -> Stand
  c[2][0] = 10;  // Walk -> Stand
  c[2][2] = 50;
  const std::string s = summarize_confusions(report_from_confusion(c));
  const auto sit = s.find("- Sit is often misclassified as Stand (40 windows, 40.0% of Sit)");
  const auto walk = s.find("- Walk is often misclassified as Stand (10 windows, 16.7% of Walk)");
  ASSERT_NE(sit, std::string::npos);
  ASSERT_NE(walk, std::string::npos);
  EXPECT_LT(sit, walk);
}

TEST(Summarize, TopKMatchesSortOracle) {
  static const char* names[] = {"Stand", "Sit", "Walk", "Lie", "Others"};
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<int> count(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    ConfusionMatrix c{};
    for (auto& row : c) {
      for (auto& v : row) v = static_cast<std::uint64_t>(count(gen));
    }
    c[0][0] += 1;
    const std::size_t k = 1 + trial % 5;
    const std::string s = summarize_confusions(report_from_confusion(c), k);
    std::string expected;
    for (const auto& [n, t, p] : oracle::top_offdiagonal(c, k)) {
      expected += std::string("- ") + names[t] + " is often misclassified as " + names[p] + " (" + std::to_string(n) +
                  " windows";
      expected += "|";
    }
    std::string actual;
    static const std::regex line(R"(^(- \w+ is often misclassified as \w+ \(\d+ windows), .*$)", std::regex::multiline);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), line); it != std::sregex_iterator(); ++it) {
      actual += (*it)[1].str() + "|";
    }
    ASSERT_EQ(actual, expected) << s;
  }
}

TEST(Parse, SensorFixtureVariantA) {
  const auto set = parse_sensor_suggestions(fixture_reply("reply_sensors_A.txt"), catalog());
  const std::set<std::string> got(set.resolved.begin(), set.resolved.end());
  for (const char* id : {"RWR", "LWR", "R-SHOE", "L-SHOE", "HIP"}) EXPECT_TRUE(got.count(id)) << id;
  const auto nine = pioneering_a_sensor_ids();
  EXPECT_EQ(got, std::set<std::string>(nine.begin(), nine.end()));
  EXPECT_EQ(set.unresolved, std::vector<std::string>{"chest"});
}

TEST(Parse, SensorFixtureVariantB) {
  const auto set = parse_sensor_suggestions(fixture_reply("reply_sensors_B.txt"), catalog());
  const auto ten = pioneering_b_sensor_ids();
  EXPECT_EQ(std::set<std::string>(set.resolved.begin(), set.resolved.end()), std::set<std::string>(ten.begin(), ten.end()));
  EXPECT_EQ(set.resolved.size(), 10u);
  EXPECT_TRUE(set.unresolved.empty());
}

TEST(Parse, FeatureFixture) {
  const auto set = parse_feature_suggestions(fixture_reply("reply_features.txt"));
  EXPECT_EQ(set.resolved, (std::vector<std::string>{"sma", "energy", "entropy", "zcr", "mcr", "fft_coeffs", "axis_corr",
                                                    "pitch_roll", "jerk", "peak_freq"}));
  EXPECT_EQ(set.unresolved.size(), 4u);
  EXPECT_EQ(set.kind, SuggestionKind::Feature);
}

TEST(Parse, SmallExamples) {
  const auto tail = parse_sensor_suggestions("install a sensor on the tail", catalog());
  EXPECT_TRUE(tail.resolved.empty());
  EXPECT_EQ(tail.unresolved, std::vector<std::string>{"tail"});
  EXPECT_TRUE(parse_sensor_suggestions("", catalog()).resolved.empty());
  EXPECT_TRUE(parse_feature_suggestions("").resolved.empty());
  const auto twice = parse_feature_suggestions("1. Energy: sum of squares\n2. Energy\n3. Jerk");
  EXPECT_EQ(twice.resolved, (std::vector<std::string>{"energy", "jerk"}));
  const auto bullets = parse_sensor_suggestions("- Right wrist\n- left shoe - for gait\n", catalog());
  EXPECT_EQ(bullets.resolved, (std::vector<std::string>{"RWR", "L-SHOE"}));
  const auto block = parse_sensor_suggestions("Text.\nSUGGESTED_SENSORS: [\"hip\", \"back\"]", catalog());
  EXPECT_EQ(block.resolved, (std::vector<std::string>{"HIP", "BACK"}));
}

TEST(Parse, NeverThrowsAndResolvedRoundTrips) {
  std::mt19937_64 gen(31);
  const std::string alphabet = "abc xyz-:.*[]\"'\n1234567890()#RWRHIPshoe wrist\t";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    for (int i = 0; i < 200; ++i) text += alphabet[pick(gen)];
    SuggestionSet s, f;
    ASSERT_NO_THROW(s = parse_sensor_suggestions(text, catalog()));
    ASSERT_NO_THROW(f = parse_feature_suggestions(text));
    for (const auto& id : s.resolved) ASSERT_NE(catalog().find(id), nullptr);
    for (const auto& id : f.resolved) ASSERT_NE(find_feature(id), nullptr);
    ASSERT_EQ(std::set<std::string>(s.resolved.begin(), s.resolved.end()).size(), s.resolved.size());
  }
}

TEST(SuggestionSet, JsonRoundTrip) {
  testutil::TempDir dir("sugg");
  auto set = parse_feature_suggestions(fixture_reply("reply_features.txt"), "abc123");
  set.save(dir / "s.json");
  const auto back = SuggestionSet::load(dir / "s.json");
  EXPECT_EQ(back.kind, set.kind);
  EXPECT_EQ(back.resolved, set.resolved);
  EXPECT_EQ(back.unresolved, set.unresolved);
  EXPECT_EQ(back.raw_reply, set.raw_reply);
  EXPECT_EQ(back.prompt_fingerprint, "abc123");
}

TEST(Normalize, StripsFiller) {
  EXPECT_EQ(normalize_phrase("**Install a new sensor on the Chest**"), "chest");
  EXPECT_EQ(resolve_feature_name("Signal Magnitude Area (SMA)").id, "sma");
  EXPECT_EQ(resolve_feature_name("zero-crossing rate").id, "zcr");
  EXPECT_THROW(resolve_feature_name("autocorrelation"), UnresolvedNameError);
}
