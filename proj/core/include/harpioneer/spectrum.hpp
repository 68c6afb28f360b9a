#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace harpioneer::dsp {

/// Magnitudes |X_m| for m in [first_bin, last_bin] of the unnormalized DFT
/// X_m = sum_n x_n exp(-2*pi*i*m*n/N). Rectangular window, no padding.
std::vector<double> dft_magnitudes(std::span<const double> x, std::size_t first_bin,
                                   std::size_t last_bin);

}  // namespace harpioneer::dsp
