#include "harpioneer/features.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/spectrum.hpp"
#include "parallel.hpp"

namespace harpioneer {

namespace {

constexpr std::array<const char*, 3> kAxisNames = {"x", "y", "z"};

void require_length(std::span<const double> x, std::size_t minimum, std::string_view what) {
  if (x.size() < minimum) {
    throw WindowTooShortError(
        fmt::format("{} needs at least {} samples, got {}", what, minimum, x.size()));
  }
}

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(fmt::format("axis lengths differ ({} vs {})", a.size(), b.size()));
  }
}

double mean_of(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

std::size_t integer_param(const FeatureSpec& spec, const std::string& key) {
  return static_cast<std::size_t>(spec.param(key));
}

}  // namespace

const std::vector<FeatureInfo>& feature_registry() {
  static const std::vector<FeatureInfo> registry = {
      {"mean", "mean", FeatureScope::Axis, {"mean", "average"}, {}},
      {"std", "standard deviation", FeatureScope::Axis, {"standard deviation", "std"}, {}},
      {"var", "variance", FeatureScope::Axis, {"variance"}, {}},
      {"min", "min", FeatureScope::Axis, {"min", "minimum"}, {}},
      {"max", "max", FeatureScope::Axis, {"max", "maximum"}, {}},
      {"sma", "Signal Magnitude Area (SMA)", FeatureScope::Triad,
       {"signal magnitude area", "sma"}, {}},
      {"energy", "Energy", FeatureScope::Axis, {"energy", "signal energy"}, {}},
      {"entropy", "Entropy", FeatureScope::Axis, {"entropy"}, {{"bins", 16.0}}},
      {"zcr", "Zero Crossing Rate", FeatureScope::Axis,
       {"zero crossing rate", "zero-crossing rate", "zcr"}, {}},
      {"mcr", "Mean Crossing Rate", FeatureScope::Axis,
       {"mean crossing rate", "mean-crossing rate", "mcr"}, {}},
      {"fft_coeffs", "Fast Fourier Transform (FFT) Coefficients", FeatureScope::Axis,
       {"fast fourier transform", "fft coefficients", "fft"}, {{"k", 5.0}}},
      {"axis_corr", "Correlation between axes", FeatureScope::Triad,
       {"correlation between axes", "axis correlation", "correlation"}, {}},
      {"pitch_roll", "Pitch and Roll", FeatureScope::AccelerometerTriad,
       {"pitch and roll", "pitch", "roll"}, {}},
      {"jerk", "Jerk", FeatureScope::Axis, {"jerk"}, {}},
      {"peak_freq", "Peak Frequency", FeatureScope::Axis,
       {"peak frequency", "dominant frequency"}, {}},
  };
  return registry;
}

const FeatureInfo* find_feature(std::string_view id) noexcept {
  for (const auto& info : feature_registry()) {
    if (info.id == id) return &info;
  }
  return nullptr;
}

FeatureSpec FeatureSpec::make(std::string_view name) {
  const FeatureInfo* info = find_feature(name);
  if (info == nullptr) throw ConfigError(fmt::format("unknown feature '{}'", name));
  return FeatureSpec{std::string(name), info->default_params};
}

void FeatureSpec::validate() const {
  const FeatureInfo* info = find_feature(name);
  if (info == nullptr) throw ConfigError(fmt::format("unknown feature '{}'", name));
  for (const auto& [key, value] : params) {
    if (!info->default_params.contains(key)) {
      throw ConfigError(fmt::format("feature '{}' has no parameter '{}'", name, key));
    }
    const bool integral = std::isfinite(value) && value == std::floor(value);
    if (key == "bins" && !(integral && value >= 2.0)) {
      throw ConfigError(fmt::format("entropy bins must be an integer >= 2, got {}", value));
    }
    if (key == "k" && !(integral && value >= 1.0)) {
      throw ConfigError(fmt::format("fft_coeffs k must be an integer >= 1, got {}", value));
    }
  }
}

double FeatureSpec::param(const std::string& key) const {
  if (const auto it = params.find(key); it != params.end()) return it->second;
  const FeatureInfo* info = find_feature(name);
  if (info != nullptr) {
    if (const auto it = info->default_params.find(key); it != info->default_params.end()) {
      return it->second;
    }
  }
  throw ConfigError(fmt::format("feature '{}' has no parameter '{}'", name, key));
}

std::vector<FeatureSpec> baseline_feature_specs() {
  std::vector<FeatureSpec> specs;
  for (const char* id : {"mean", "std", "var", "min", "max"}) specs.push_back(FeatureSpec::make(id));
  return specs;
}

std::vector<FeatureSpec> augmented_feature_specs() {
  std::vector<FeatureSpec> specs;
  for (const char* id : {"sma", "energy", "entropy", "zcr", "mcr", "fft_coeffs", "axis_corr",
                         "pitch_roll", "jerk", "peak_freq"}) {
    specs.push_back(FeatureSpec::make(id));
  }
  return specs;
}

std::vector<FeatureSpec> full_feature_specs() {
  auto specs = baseline_feature_specs();
  for (auto& s : augmented_feature_specs()) specs.push_back(std::move(s));
  return specs;
}

namespace features {

BasicStats basic_stats(std::span<const double> x) {
  if (x.empty()) throw WindowTooShortError("basic_stats needs at least 1 sample, got 0");
  BasicStats s;
  s.mean = mean_of(x);
  s.min = x.front();
  s.max = x.front();
  double ss = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    ss += d * d;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.var = ss / static_cast<double>(x.size());
  s.std = std::sqrt(s.var);
  return s;
}

double sma(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
  require_length(x, 1, "sma");
  require_same_length(x, y);
  require_same_length(x, z);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i]) + std::abs(y[i]) + std::abs(z[i]);
  return sum / static_cast<double>(x.size());
}

double energy(std::span<const double> x) {
  require_length(x, 2, "energy");
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum / static_cast<double>(x.size());
}

double entropy(std::span<const double> x, std::size_t bins) {
  require_length(x, 2, "entropy");
  if (bins < 2) throw ConfigError("entropy needs at least 2 bins");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 0.0)) return 0.0;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - lo) / range * static_cast<double>(bins));
    ++counts[std::min(b, bins - 1)];
  }
  const double n = static_cast<double>(x.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h / std::log2(static_cast<double>(bins));
}

double zero_crossing_rate(std::span<const double> x) {
  require_length(x, 2, "zero_crossing_rate");
  std::size_t crossings = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] * x[i + 1] < 0.0) ++crossings;
  }
  return static_cast<double>(crossings) / static_cast<double>(x.size() - 1);
}

double mean_crossing_rate(std::span<const double> x) {
  require_length(x, 2, "mean_crossing_rate");
  const double m = mean_of(x);
  std::vector<double> centered(x.begin(), x.end());
  for (double& v : centered) v -= m;
  return zero_crossing_rate(centered);
}

std::vector<double> fft_coefficients(std::span<const double> x, std::size_t k) {
  if (k == 0) throw ConfigError("fft_coeffs k must be at least 1");
  require_length(x, 2 * k + 2, "fft_coeffs");
  return dsp::dft_magnitudes(x, 1, k);
}

double axis_correlation(std::span<const double> a, std::span<const double> b) {
  require_length(a, 2, "axis_correlation");
  require_same_length(a, b);
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

PitchRoll pitch_roll(std::span<const double> x, std::span<const double> y,
                     std::span<const double> z) {
  require_length(x, 1, "pitch_roll");
  require_same_length(x, y);
  require_same_length(x, z);
  const double mx = mean_of(x);
  const double my = mean_of(y);
  const double mz = mean_of(z);
  return {std::atan2(-mx, std::sqrt(my * my + mz * mz)), std::atan2(my, mz)};
}

double jerk(std::span<const double> x, double sample_rate_hz) {
  require_length(x, 2, "jerk");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += std::abs(x[i + 1] - x[i]);
  return sum / static_cast<double>(x.size() - 1) * sample_rate_hz;
}

double peak_frequency(std::span<const double> x, double sample_rate_hz) {
  require_length(x, 2, "peak_frequency");
  const std::size_t n = x.size();
  const auto mags = dsp::dft_magnitudes(x, 1, n / 2);
  // Bins closer than the DFT's rounding error count as tied.
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  const double tie_tol = 1e-12 * l1;
  const double top = *std::max_element(mags.begin(), mags.end());
  std::size_t best = 0;
  while (mags[best] < top - tie_tol) ++best;
  return static_cast<double>(best + 1) * sample_rate_hz / static_cast<double>(n);
}

}  // namespace features

ChannelLayout ChannelLayout::of(const Recording& recording) {
  ChannelLayout layout;
  for (const auto& loc : recording.locations) {
    Location entry{loc.location_id, {}};
    for (const auto& g : loc.groups) entry.modalities.push_back(g.modality);
    layout.locations.push_back(std::move(entry));
  }
  return layout;
}

namespace {

bool is_accelerometer_modality(std::string_view modality) {
  return modality == "acc" || modality == "imu_acc";
}

/// Column suffixes one spec emits for one axis (Axis scope) or one triad.
std::vector<std::string> spec_parts(const FeatureSpec& spec) {
  if (spec.name == "fft_coeffs") {
    std::vector<std::string> parts;
    const std::size_t k = integer_param(spec, "k");
    for (std::size_t i = 1; i <= k; ++i) parts.push_back(fmt::format("fft_coeffs.{}", i));
    return parts;
  }
  if (spec.name == "axis_corr") return {"axis_corr.xy", "axis_corr.xz", "axis_corr.yz"};
  if (spec.name == "pitch_roll") return {"pitch_roll.pitch", "pitch_roll.roll"};
  return {spec.name};
}

const FeatureInfo& info_for(const FeatureSpec& spec) {
  spec.validate();
  return *find_feature(spec.name);
}

template <typename Emit>
void for_each_column(const ChannelLayout& layout, std::span<const FeatureSpec> specs, Emit&& emit) {
  for (std::size_t l = 0; l < layout.locations.size(); ++l) {
    const auto& loc = layout.locations[l];
    for (std::size_t g = 0; g < loc.modalities.size(); ++g) {
      const std::string& modality = loc.modalities[g];
      for (const auto& spec : specs) {
        const FeatureInfo& info = info_for(spec);
        const auto parts = spec_parts(spec);
        switch (info.scope) {
          case FeatureScope::Axis:
            for (std::size_t a = 0; a < 3; ++a) {
              for (const auto& part : parts) {
                emit(l, g, spec,
                     fmt::format("{}.{}_{}.{}", loc.id, modality, kAxisNames[a], part));
              }
            }
            break;
          case FeatureScope::AccelerometerTriad:
            if (!is_accelerometer_modality(modality)) break;
            [[fallthrough]];
          case FeatureScope::Triad:
            for (const auto& part : parts) emit(l, g, spec, fmt::format("{}.{}.{}", loc.id, modality, part));
            break;
        }
      }
    }
  }
}

/// Values one spec produces for a group, in the same order as its columns.
void compute_spec(const Window& w, std::size_t l, std::size_t g, const FeatureSpec& spec,
                  std::vector<double>& out) {
  const FeatureInfo& info = *find_feature(spec.name);
  const auto x = w.axis(l, g, 0);
  const auto y = w.axis(l, g, 1);
  const auto z = w.axis(l, g, 2);
  const double rate = w.recording->sample_rate_hz;
  if (info.scope != FeatureScope::Axis) {
    if (spec.name == "sma") {
      out.push_back(features::sma(x, y, z));
    } else if (spec.name == "axis_corr") {
      out.push_back(features::axis_correlation(x, y));
      out.push_back(features::axis_correlation(x, z));
      out.push_back(features::axis_correlation(y, z));
    } else if (spec.name == "pitch_roll") {
      const auto pr = features::pitch_roll(x, y, z);
      out.push_back(pr.pitch);
      out.push_back(pr.roll);
    }
    return;
  }
  for (const auto axis : {x, y, z}) {
    if (spec.name == "mean") {
      out.push_back(features::basic_stats(axis).mean);
    } else if (spec.name == "std") {
      out.push_back(features::basic_stats(axis).std);
    } else if (spec.name == "var") {
      out.push_back(features::basic_stats(axis).var);
    } else if (spec.name == "min") {
      out.push_back(features::basic_stats(axis).min);
    } else if (spec.name == "max") {
      out.push_back(features::basic_stats(axis).max);
    } else if (spec.name == "energy") {
      out.push_back(features::energy(axis));
    } else if (spec.name == "entropy") {
      out.push_back(features::entropy(axis, integer_param(spec, "bins")));
    } else if (spec.name == "zcr") {
      out.push_back(features::zero_crossing_rate(axis));
    } else if (spec.name == "mcr") {
      out.push_back(features::mean_crossing_rate(axis));
    } else if (spec.name == "fft_coeffs") {
      const auto c = features::fft_coefficients(axis, integer_param(spec, "k"));
      out.insert(out.end(), c.begin(), c.end());
    } else if (spec.name == "jerk") {
      out.push_back(features::jerk(axis, rate));
    } else if (spec.name == "peak_freq") {
      out.push_back(features::peak_frequency(axis, rate));
    }
  }
}

}  // namespace

std::vector<std::string> feature_schema(const ChannelLayout& layout,
                                        std::span<const FeatureSpec> specs) {
  std::vector<std::string> columns;
  for_each_column(layout, specs, [&](std::size_t, std::size_t, const FeatureSpec&, std::string name) {
    columns.push_back(std::move(name));
  });
  return columns;
}

FeatureVector featurize_window(const Window& window, std::span<const FeatureSpec> specs) {
  FeatureVector fv;
  const ChannelLayout layout = ChannelLayout::of(*window.recording);
  fv.columns = feature_schema(layout, specs);
  fv.values.reserve(fv.columns.size());

  for (std::size_t l = 0; l < layout.locations.size(); ++l) {
    for (std::size_t g = 0; g < layout.locations[l].modalities.size(); ++g) {
      for (const auto& spec : specs) {
        const std::size_t before = fv.values.size();
        try {
          if (info_for(spec).scope == FeatureScope::AccelerometerTriad &&
              !is_accelerometer_modality(layout.locations[l].modalities[g])) {
            continue;
          }
          compute_spec(window, l, g, spec, fv.values);
        } catch (const WindowTooShortError& e) {
          throw WindowTooShortError(fmt::format("{}: {}", fv.columns[before], e.what()));
        }
        for (std::size_t i = before; i < fv.values.size(); ++i) {
          if (!std::isfinite(fv.values[i])) {
            throw Error(fmt::format("{}: non-finite feature value", fv.columns[i]));
          }
        }
      }
    }
  }
  return fv;
}

FeatureMatrix featurize_windows(std::span<const Window> windows, std::span<const FeatureSpec> specs) {
  FeatureMatrix m;
  if (windows.empty()) {
    return m;
  }
  const ChannelLayout layout = ChannelLayout::of(*windows.front().recording);
  m.columns = feature_schema(layout, specs);
  m.rows = windows.size();
  m.data.assign(m.rows * m.columns.size(), 0.0);
  detail::parallel_for(windows.size(), [&](std::size_t i) {
    if (!(ChannelLayout::of(*windows[i].recording) == layout)) {
      throw Error("windows with different channel layouts cannot share a feature matrix");
    }
    const FeatureVector fv = featurize_window(windows[i], specs);
    std::copy(fv.values.begin(), fv.values.end(), m.data.begin() + static_cast<std::ptrdiff_t>(i * m.cols()));
  });
  return m;
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix,
                       std::span<const ActivityLabel> labels) {
  if (labels.size() != matrix.rows) throw Error("label count does not match feature rows");
  for (const auto& c : matrix.columns) out << c << ',';
  out << "label\n";
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    for (double v : matrix.row(r)) out << fmt::format("{}", v) << ',';
    out << label_name(labels[r]) << '\n';
  }
}

}  // namespace harpioneer
