#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "harpioneer/ingest.hpp"
#include "harpioneer/labels.hpp"

namespace harpioneer {

/// A fixed-length view [start, end) into a shared Recording.
struct Window {
  std::shared_ptr<const Recording> recording;
  std::size_t start = 0;
  std::size_t end = 0;
  ActivityLabel label = ActivityLabel::Others;

  std::size_t size() const noexcept { return end - start; }
  std::span<const double> axis(std::size_t location, std::size_t group, std::size_t axis) const;
};

struct SegmentParams {
  double window_s = 5.0;
  double overlap_frac = 0.3;
};

std::size_t window_length_samples(double window_s, double sample_rate_hz);
std::size_t window_step_samples(std::size_t window_len, double overlap_frac);

/// Sliding windows starting at 0, step, 2*step, ...; the trailing partial
/// window is dropped. Throws SegmentationError when the recording is shorter
/// than one window.
std::vector<Window> segment(const std::shared_ptr<const Recording>& recording,
                            const SegmentParams& params = {});

/// Majority vote. Ties prefer a non-Others class, then Stand < Sit < Walk < Lie.
ActivityLabel window_label(std::span<const ActivityLabel> labels);

}  // namespace harpioneer
