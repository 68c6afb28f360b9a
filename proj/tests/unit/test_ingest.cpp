#include <cmath>
#include <cstring>
#include <random>

#include <gtest/gtest.h>

#include "harpioneer/catalog.hpp"
#include "harpioneer/errors.hpp"
#include "harpioneer/ingest.hpp"
#include "harpioneer/paths.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace harpioneer;

namespace {

const SensorCatalog& shipped() {
  static const SensorCatalog catalog = SensorCatalog::load(default_catalog_path());
  return catalog;
}

// Columns: 1 time, 2-4 "A" acc, 5-7 "B" acc, 8 label.
SensorCatalog tiny_catalog() {
  std::vector<SensorLocation> locs{
      {"A", "left elbow", {"left elbow", "elbow"}, {{"acc", {2, 3, 4}}}},
      {"B", "right elbow", {"right elbow", "elbow"}, {{"acc", {5, 6, 7}}}},
  };
  return SensorCatalog::from_parts(locs, {{1, ActivityLabel::Stand}, {2, ActivityLabel::Walk}}, 8, 8);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Labels, NamesAndParse) {
  EXPECT_EQ(label_name(ActivityLabel::Stand), "Stand");
  EXPECT_EQ(label_name(ActivityLabel::Others), "Others");
  EXPECT_EQ(parse_label("Lie"), ActivityLabel::Lie);
  EXPECT_FALSE(parse_label("Run").has_value());
  EXPECT_EQ(kNumClasses, 5u);
}

TEST(Catalog, ShippedCatalogShape) {
  const auto& c = shipped();
  EXPECT_EQ(c.column_count(), 250);
  EXPECT_EQ(c.label_column(), 244);
  EXPECT_DOUBLE_EQ(c.sample_rate_hz(), 30.0);
  EXPECT_EQ(c.locations().size(), 18u);
  for (const auto& loc : c.locations()) {
    EXPECT_TRUE(loc.has_accelerometer()) << loc.id;
    EXPECT_FALSE(loc.channel_columns().empty());
  }
}

TEST(Catalog, LocomotionCodes) {
  const auto& c = shipped();
  EXPECT_EQ(c.map_locomotion_label(0), ActivityLabel::Others);
  EXPECT_EQ(c.map_locomotion_label(1), ActivityLabel::Stand);
  EXPECT_EQ(c.map_locomotion_label(2), ActivityLabel::Walk);
  EXPECT_EQ(c.map_locomotion_label(4), ActivityLabel::Sit);
  EXPECT_EQ(c.map_locomotion_label(5), ActivityLabel::Lie);
  EXPECT_EQ(c.map_locomotion_label(999), ActivityLabel::Others);
  EXPECT_EQ(c.map_locomotion_label(-3), ActivityLabel::Others);
}

TEST(Catalog, ResolveExamples) {
  const auto& c = shipped();
  EXPECT_EQ(c.resolve("HIP").id, "HIP");
  EXPECT_EQ(c.resolve("hip").id, "HIP");
  EXPECT_EQ(c.resolve("right wrist").id, "RWR");
  EXPECT_EQ(c.resolve("Right Ankle").id, "R-SHOE");
  EXPECT_EQ(c.resolve("a sensor on the left forearm").id, "LLA");
  EXPECT_THROW(c.resolve("tail"), UnresolvedNameError);
}

TEST(Catalog, ResolveRoundTripsEveryId) {
  for (const auto& loc : shipped().locations()) EXPECT_EQ(shipped().resolve(loc.id).id, loc.id);
}

TEST(Catalog, AmbiguousAliasListsCandidates) {
  const auto c = tiny_catalog();
  try {
    c.resolve("elbow");
    FAIL() << "expected ambiguity";
  } catch (const AmbiguousNameError& e) {
    EXPECT_EQ(e.candidates(), (std::vector<std::string>{"A", "B"}));
  }
  EXPECT_EQ(c.resolve("right elbow").id, "B");
}

TEST(Catalog, ValidationRejectsBadCatalogs) {
  const std::map<int, ActivityLabel> codes{{1, ActivityLabel::Stand}};
  EXPECT_THROW(SensorCatalog::from_parts({{"A", "a", {"a"}, {{"acc", {2, 3, 4}}}},
                                          {"A", "b", {"b"}, {{"acc", {5, 6, 7}}}}},
                                         codes, 8, 8),
               ConfigError);
  EXPECT_THROW(SensorCatalog::from_parts({{"A", "a", {"Upper"}, {{"acc", {2, 3, 4}}}}}, codes, 8, 8), ConfigError);
  EXPECT_THROW(SensorCatalog::from_parts({{"A", "a", {"a"}, {{"acc", {2, 3, 4}}}},
                                          {"B", "b", {"b"}, {{"acc", {4, 5, 6}}}}},
                                         codes, 8, 8),
               ConfigError);
  EXPECT_THROW(SensorCatalog::from_parts({{"A", "a", {"a"}, {}}}, codes, 8, 8), ConfigError);
  EXPECT_THROW(SensorCatalog::from_parts({{"A", "a", {"a"}, {{"acc", {2, 3, 9}}}}}, codes, 8, 8), ConfigError);
  EXPECT_THROW(SensorCatalog::from_parts({{"A", "a", {"a"}, {{"acc", {2, 3, 8}}}}}, codes, 8, 8), ConfigError);
  EXPECT_THROW(shipped().at("NOPE"), ConfigError);
}

TEST(Impute, Examples) {
  const double nan = std::nan("");
  using V = std::vector<double>;
  EXPECT_EQ(impute_missing(V{1.0, nan, 3.0}), (V{1.0, 2.0, 3.0}));
  EXPECT_EQ(impute_missing(V{nan, nan, 5.0}), (V{5.0, 5.0, 5.0}));
  EXPECT_EQ(impute_missing(V{2.0, nan, nan, 4.0}), (V{2.0, 3.0, 3.0, 4.0}));
  EXPECT_EQ(impute_missing(V{7.0, nan}), (V{7.0, 7.0}));
  EXPECT_EQ(impute_missing(V{nan, nan}), (V{0.0, 0.0}));
  EXPECT_TRUE(impute_missing(V{}).empty());
}

TEST(Impute, PropertiesAgainstReference) {
  std::mt19937_64 gen(42);
  std::bernoulli_distribution missing(0.3);
  std::uniform_int_distribution<int> len(1, 60);
  std::normal_distribution<double> value(0.0, 100.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = len(gen);
    std::vector<std::optional<double>> with_gaps(n);
    std::vector<double> series(n);
    for (int i = 0; i < n; ++i) {
      if (missing(gen)) {
        series[i] = std::nan("");
      } else {
        with_gaps[i] = value(gen);
        series[i] = *with_gaps[i];
      }
    }
    const std::vector<double> once = impute_missing(series);
    const auto expected = oracle::reference_impute(with_gaps);
    ASSERT_EQ(once, expected) << "trial " << trial;
    for (int i = 0; i < n; ++i) {
      if (with_gaps[i]) ASSERT_TRUE(same_bits(once[i], *with_gaps[i]));
    }
    ASSERT_EQ(impute_missing(once), once);
  }
}

TEST(Provenance, ParsesFileNames) {
  const auto p = provenance_from_path("/data/S3-ADL4.dat");
  EXPECT_EQ(p.subject, "S3");
  EXPECT_EQ(p.run, "ADL4");
  const auto q = provenance_from_path("misc.dat");
  EXPECT_EQ(q.subject, "misc");
  EXPECT_EQ(q.run, "");
}

TEST(LoadRecording, HandWrittenFile) {
  testutil::TempDir dir("ingest");
  testutil::write_text(dir / "S1-ADL1.dat",
                       "0 1.0 0 0 9 9 9 1\n"
                       "33 NaN 0 0 9 9 9 2\n"
                       "67 3.0 0 0 9 9 9 7\n");
  const std::vector<std::string> sel{"A"};
  const Recording rec = load_recording(dir / "S1-ADL1.dat", sel, tiny_catalog());
  ASSERT_EQ(rec.size(), 3u);
  ASSERT_EQ(rec.locations.size(), 1u);
  EXPECT_EQ(rec.locations[0].location_id, "A");
  EXPECT_EQ(rec.locations[0].groups[0].axes[0], (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(rec.labels, (std::vector<ActivityLabel>{ActivityLabel::Stand, ActivityLabel::Walk, ActivityLabel::Others}));
  EXPECT_EQ(rec.timestamps_ms, (std::vector<double>{0, 33, 67}));
  EXPECT_EQ(rec.provenance.subject, "S1");
  EXPECT_DOUBLE_EQ(rec.sample_rate_hz, 30.0);
}

TEST(LoadRecording, Errors) {
  testutil::TempDir dir("ingest");
  const auto cat = tiny_catalog();
  const std::vector<std::string> sel{"A"};
  const std::vector<std::string> none;
  const std::vector<std::string> unknown{"ZZ"};
  testutil::write_text(dir / "ok.dat", "0 1 2 3 4 5 6 1\n");
  EXPECT_THROW(load_recording(dir / "ok.dat", none, cat), ConfigError);
  try {
    load_recording(dir / "ok.dat", unknown, cat);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("ZZ"), std::string::npos);
  }

  testutil::write_text(dir / "ragged.dat", "0 1 2 3 4 5 6 1\n33 1 2 3 4 5 1\n");
  try {
    load_recording(dir / "ragged.dat", sel, cat);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  testutil::write_text(dir / "text.dat", "0 1 2 3 4 5 6 1\n33 1 x 3 4 5 6 1\n");
  try {
    load_recording(dir / "text.dat", sel, cat);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  testutil::write_text(dir / "empty.dat", "");
  EXPECT_THROW(load_recording(dir / "empty.dat", sel, cat), ParseError);
  EXPECT_THROW(load_recording(dir / "missing.dat", sel, cat), Error);
}

TEST(LoadRecording, BaselineSelectionFromShippedCatalog) {
  testutil::TempDir dir("ingest");
  std::string row;
  for (int c = 1; c <= 250; ++c) row += (c == 244 ? "4" : std::to_string(c)) + (c == 250 ? "\n" : " ");
  testutil::write_text(dir / "S1-ADL1.dat", row + row);
  const std::vector<std::string> sel{"RUA^", "LUA^", "RUA_", "LUA_"};
  const Recording rec = load_recording(dir / "S1-ADL1.dat", sel, shipped());
  ASSERT_EQ(rec.locations.size(), 4u);
  for (std::size_t i = 0; i < sel.size(); ++i) {
    EXPECT_EQ(rec.locations[i].location_id, sel[i]);
    const auto& loc = shipped().at(sel[i]);
    EXPECT_EQ(rec.locations[i].groups[0].axes[2][0], loc.groups[0].columns[2]);
  }
  EXPECT_EQ(rec.labels[0], ActivityLabel::Sit);
}
