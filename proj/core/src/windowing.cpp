#include "harpioneer/windowing.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"

namespace harpioneer {

std::span<const double> Window::axis(std::size_t location, std::size_t group, std::size_t axis) const {
  const auto& series = recording->locations.at(location).groups.at(group).axes.at(axis);
  return std::span<const double>(series).subspan(start, end - start);
}

std::size_t window_length_samples(double window_s, double sample_rate_hz) {
  if (!(window_s > 0.0) || !(sample_rate_hz > 0.0)) {
    throw ConfigError("window length and sample rate must be positive");
  }
  const double len = std::round(window_s * sample_rate_hz);
  if (len < 2.0) throw ConfigError(fmt::format("window of {} s is shorter than 2 samples", window_s));
  return static_cast<std::size_t>(len);
}

std::size_t window_step_samples(std::size_t window_len, double overlap_frac) {
  if (!(overlap_frac >= 0.0 && overlap_frac < 1.0)) {
    throw ConfigError(fmt::format("overlap fraction {} outside [0, 1)", overlap_frac));
  }
  const double step = std::round(static_cast<double>(window_len) * (1.0 - overlap_frac));
  return step < 1.0 ? 1 : static_cast<std::size_t>(step);
}

std::vector<Window> segment(const std::shared_ptr<const Recording>& recording,
                            const SegmentParams& params) {
  const std::size_t len = window_length_samples(params.window_s, recording->sample_rate_hz);
  const std::size_t step = window_step_samples(len, params.overlap_frac);
  const std::size_t n = recording->size();
  if (n < len) {
    throw SegmentationError(fmt::format("{}: {} samples is shorter than one window of {}",
                                        recording->provenance.source.string(), n, len));
  }
  std::vector<Window> windows;
  windows.reserve((n - len) / step + 1);
  const std::span<const ActivityLabel> labels(recording->labels);
  for (std::size_t start = 0; start + len <= n; start += step) {
    windows.push_back(Window{recording, start, start + len, window_label(labels.subspan(start, len))});
  }
  return windows;
}

ActivityLabel window_label(std::span<const ActivityLabel> labels) {
  std::array<std::size_t, kNumClasses> counts{};
  for (ActivityLabel l : labels) ++counts[label_index(l)];
  // Candidates in tie-break order: non-Others classes first, in class order.
  constexpr std::array<ActivityLabel, kNumClasses> preference = {
      ActivityLabel::Stand, ActivityLabel::Sit, ActivityLabel::Walk, ActivityLabel::Lie,
      ActivityLabel::Others};
  ActivityLabel best = preference.front();
  for (ActivityLabel l : preference) {
    if (counts[label_index(l)] > counts[label_index(best)]) best = l;
  }
  return best;
}

}  // namespace harpioneer
