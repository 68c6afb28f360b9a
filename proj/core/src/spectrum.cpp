#include "harpioneer/spectrum.hpp"

#include <cmath>
#include <numbers>

namespace harpioneer::dsp {

std::vector<double> dft_magnitudes(std::span<const double> x, std::size_t first_bin,
                                   std::size_t last_bin) {
  const std::size_t n = x.size();
  std::vector<double> out;
  if (n == 0 || last_bin < first_bin) return out;

  // Exact twiddles: exp(-2*pi*i*m*k/N) depends only on (m*k) mod N.
  std::vector<double> cos_table(n);
  std::vector<double> sin_table(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    cos_table[j] = std::cos(angle);
    sin_table[j] = std::sin(angle);
  }

  out.reserve(last_bin - first_bin + 1);
  for (std::size_t m = first_bin; m <= last_bin; ++m) {
    double re = 0.0;
    double im = 0.0;
    std::size_t idx = 0;
    const std::size_t stride = m % n;
    for (std::size_t k = 0; k < n; ++k) {
      re += x[k] * cos_table[idx];
      im -= x[k] * sin_table[idx];
      idx += stride;
      if (idx >= n) idx -= n;
    }
    out.push_back(std::hypot(re, im));
  }
  return out;
}

}  // namespace harpioneer::dsp
