#include "harpioneer/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/paths.hpp"
#include "harpioneer/random.hpp"

namespace harpioneer {

namespace fs = std::filesystem;

namespace {

using Vec3 = std::array<double, 3>;

struct Regime {
  Vec3 gravity;     // unit-ish direction in the body frame
  double freq_hz;   // dominant movement frequency
  double amplitude; // milli-g on accelerometers
};

// Indexed by ActivityLabel.
constexpr std::array<Regime, kNumClasses> kRegimes{{
    {{0.05, -0.98, 0.10}, 0.4, 20.0},    // Stand
    {{0.65, -0.55, 0.50}, 0.3, 15.0},    // Sit
    {{0.10, -0.90, -0.40}, 1.9, 200.0},  // Walk
    {{0.95, 0.15, -0.25}, 0.2, 10.0},    // Lie
    {{-0.50, -0.55, 0.65}, 1.0, 60.0},   // Others
}};

enum class Signal { Accelerometer, Gyroscope, Magnetometer };

Signal signal_of(const std::string& modality) {
  if (modality == "acc" || modality == "imu_acc") return Signal::Accelerometer;
  if (modality == "gyro") return Signal::Gyroscope;
  return Signal::Magnetometer;
}

struct Channel {
  int column;      // 1-based
  Signal signal;
  int axis;
  Vec3 tilt;       // per-location mounting offset
  double phase;
};

std::vector<Channel> catalog_channels(const SensorCatalog& catalog, Rng& rng) {
  std::vector<Channel> channels;
  for (const auto& loc : catalog.locations()) {
    const Vec3 tilt{rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15)};
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (const auto& g : loc.groups) {
      for (int a = 0; a < 3; ++a) channels.push_back({g.columns[a], signal_of(g.modality), a, tilt, phase});
    }
  }
  return channels;
}

std::map<ActivityLabel, int> raw_codes(const SensorCatalog& catalog) {
  std::map<ActivityLabel, int> codes;
  for (const auto& [code, label] : catalog.locomotion_codes()) codes.emplace(label, code);
  if (!codes.count(ActivityLabel::Others)) codes[ActivityLabel::Others] = 0;
  return codes;
}

std::vector<ActivityLabel> label_sequence(std::size_t n, double rate, const SynthOptions& o, Rng& rng) {
  std::vector<ActivityLabel> labels;
  labels.reserve(n);
  int previous = -1;
  while (labels.size() < n) {
    int cls = static_cast<int>(rng.below(kNumClasses));
    if (cls == previous) cls = (cls + 1 + static_cast<int>(rng.below(kNumClasses - 1))) % static_cast<int>(kNumClasses);
    previous = cls;
    const auto len = static_cast<std::size_t>(std::lround(rng.uniform(o.min_segment_s, o.max_segment_s) * rate));
    for (std::size_t i = 0; i < std::max<std::size_t>(1, len) && labels.size() < n; ++i) {
      labels.push_back(static_cast<ActivityLabel>(cls));
    }
  }
  return labels;
}

// Runs of 1..5 samples started with probability p give an expected missing
// fraction of 3p / (1 + 2p); solve for p.
std::vector<char> missing_mask(std::size_t n, double rate, Rng& rng) {
  std::vector<char> mask(n, 0);
  if (rate <= 0.0) return mask;
  const double p = rate / (3.0 - 2.0 * rate);
  for (std::size_t i = 0; i < n;) {
    if (rng.uniform() < p) {
      const std::size_t len = 1 + rng.below(5);
      for (std::size_t k = 0; k < len && i < n; ++k) mask[i++] = 1;
    } else {
      ++i;
    }
  }
  return mask;
}

double sample_value(const Channel& ch, const Regime& r, double t, double seg_phase, Rng& rng) {
  const double g = r.gravity[ch.axis] + ch.tilt[ch.axis];
  const double w = 2.0 * std::numbers::pi * r.freq_hz * t + ch.phase + seg_phase + ch.axis * 0.9;
  switch (ch.signal) {
    case Signal::Accelerometer: return 1000.0 * g + r.amplitude * std::sin(w) + rng.normal() * 8.0;
    case Signal::Gyroscope: return 0.5 * r.amplitude * std::cos(w) + rng.normal() * 5.0;
    case Signal::Magnetometer: return 400.0 * g + 0.2 * r.amplitude * std::sin(w) + rng.normal() * 6.0;
  }
  return 0.0;
}

std::string render_file(const SensorCatalog& catalog, const SynthOptions& o, Rng& rng) {
  const double rate = catalog.sample_rate_hz();
  const auto n = static_cast<std::size_t>(std::lround(o.duration_s * rate));
  const auto channels = catalog_channels(catalog, rng);
  const auto labels = label_sequence(n, rate, o, rng);
  const auto codes = raw_codes(catalog);

  std::vector<std::vector<char>> masks;
  masks.reserve(channels.size());
  for (std::size_t c = 0; c < channels.size(); ++c) masks.push_back(missing_mask(n, o.nan_rate, rng));

  const int ncols = catalog.column_count();
  std::vector<std::string> row(static_cast<std::size_t>(ncols));
  fmt::memory_buffer out;
  double seg_phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || labels[i] != labels[i - 1]) seg_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::fill(row.begin(), row.end(), "0");
    const double t = static_cast<double>(i) / rate;
    row[catalog.time_column() - 1] = fmt::format("{}", std::llround(t * 1000.0));
    row[catalog.label_column() - 1] = fmt::format("{}", codes.at(labels[i]));
    const Regime& regime = kRegimes[label_index(labels[i])];
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const double v = sample_value(channels[c], regime, t, seg_phase, rng);
      row[channels[c].column - 1] = masks[c][i] ? "NaN" : fmt::format("{}", std::llround(v));
    }
    fmt::format_to(std::back_inserter(out), "{}\n", fmt::join(row, " "));
  }
  return fmt::to_string(out);
}

}  // namespace

std::vector<fs::path> synthesize_dataset(const fs::path& out_dir, const SynthOptions& options,
                                         const SensorCatalog& catalog) {
  if (options.n_subjects < 1) throw ConfigError("synth needs at least one subject");
  if (options.runs.empty()) throw ConfigError("synth needs at least one run");
  if (!(options.duration_s > 0.0)) throw ConfigError("synth duration must be positive");
  if (!(options.nan_rate >= 0.0 && options.nan_rate < 1.0)) throw ConfigError("nan_rate must lie in [0, 1)");
  if (!(options.min_segment_s > 0.0 && options.min_segment_s <= options.max_segment_s)) {
    throw ConfigError("segment duration bounds are invalid");
  }
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  for (int s = 1; s <= options.n_subjects; ++s) {
    for (std::size_t r = 0; r < options.runs.size(); ++r) {
      Rng rng(mix_seed(options.seed) ^ mix_seed(static_cast<std::uint64_t>(s) * 1000 + r + 1));
      const fs::path path = out_dir / fmt::format("S{}-{}.dat", s, options.runs[r]);
      write_file_atomic(path, render_file(catalog, options, rng));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace harpioneer
