#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. They deliberately avoid the library's algorithms: complex
// arithmetic instead of twiddle tables, two-pass sums, explicit scans.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

namespace oracle {

/// |X_0| .. |X_last|; `last` defaults to N-1.
inline std::vector<double> naive_dft_magnitudes(const std::vector<double>& x,
                                                std::size_t last = std::numeric_limits<std::size_t>::max()) {
  const std::size_t n = x.size();
  const std::size_t count = std::min(n, last == std::numeric_limits<std::size_t>::max() ? n : last + 1);
  std::vector<double> mags(count);
  for (std::size_t m = 0; m < count; ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      const long double angle = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(m) *
                                static_cast<long double>(k) / static_cast<long double>(n);
      acc += x[k] * std::complex<double>(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
    }
    mags[m] = std::abs(acc);
  }
  return mags;
}

struct Stats {
  double mean, var, std, min, max;
};

inline Stats two_pass_stats(const std::vector<double>& x) {
  long double sum = 0.0L;
  for (double v : x) sum += v;
  const long double mean = sum / static_cast<long double>(x.size());
  long double ss = 0.0L;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = static_cast<double>(ss / static_cast<long double>(x.size()));
  return {static_cast<double>(mean), var, std::sqrt(var), *std::min_element(x.begin(), x.end()),
          *std::max_element(x.begin(), x.end())};
}

inline double direct_sma(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::fabs(x[i]) + std::fabs(y[i]) + std::fabs(z[i]);
  return static_cast<double>(s / static_cast<long double>(x.size()));
}

inline double direct_energy(const std::vector<double>& x) {
  long double s = 0.0L;
  for (double v : x) s += static_cast<long double>(v) * v;
  return static_cast<double>(s / static_cast<long double>(x.size()));
}

// Bin edges lo + b*w; a value belongs to the first bin whose upper edge
// exceeds it, the maximum falls in the last bin.
inline double histogram_entropy(const std::vector<double>& x, std::size_t bins) {
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  if (!(hi > lo)) return 0.0;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : x) {
    std::size_t b = 0;
    while (b + 1 < bins && v >= lo + (hi - lo) * static_cast<double>(b + 1) / static_cast<double>(bins)) ++b;
    ++counts[b];
  }
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(x.size());
    h -= p * std::log2(p);
  }
  return h / std::log2(static_cast<double>(bins));
}

inline double counting_zcr(const std::vector<double>& x) {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const bool a_pos = x[i] > 0.0, a_neg = x[i] < 0.0;
    const bool b_pos = x[i + 1] > 0.0, b_neg = x[i + 1] < 0.0;
    if ((a_pos && b_neg) || (a_neg && b_pos)) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(x.size() - 1);
}

inline double counting_mcr(const std::vector<double>& x) {
  const double m = two_pass_stats(x).mean;
  std::vector<double> centered;
  for (double v : x) centered.push_back(v - m);
  return counting_zcr(centered);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const Stats sa = two_pass_stats(a), sb = two_pass_stats(b);
  if (sa.std == 0.0 || sb.std == 0.0) return 0.0;
  long double cov = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - sa.mean) * (b[i] - sb.mean);
  return static_cast<double>(cov / static_cast<long double>(a.size())) / (sa.std * sb.std);
}

inline std::pair<double, double> pitch_roll_formula(const std::vector<double>& x, const std::vector<double>& y,
                                                    const std::vector<double>& z) {
  const double mx = two_pass_stats(x).mean, my = two_pass_stats(y).mean, mz = two_pass_stats(z).mean;
  return {std::atan2(-mx, std::hypot(my, mz)), std::atan2(my, mz)};
}

inline double direct_jerk(const std::vector<double>& x, double rate) {
  long double s = 0.0L;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += std::fabs(x[i + 1] - x[i]);
  return static_cast<double>(s / static_cast<long double>(x.size() - 1)) * rate;
}

inline std::size_t argmax_bin(const std::vector<double>& x) {
  const auto mags = naive_dft_magnitudes(x, x.size() / 2);
  std::size_t best = 1;
  for (std::size_t m = 2; m <= x.size() / 2; ++m) {
    if (mags[m] > mags[best]) best = m;
  }
  return best;
}

/// Scans maximal missing runs (nullopt) and fills them by the neighbor rule.
inline std::vector<double> reference_impute(const std::vector<std::optional<double>>& s) {
  const std::size_t n = s.size();
  std::vector<double> out(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    if (s[i]) {
      out[i] = *s[i];
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !s[j]) ++j;
    const bool has_prev = i > 0;
    const bool has_next = j < n;
    double fill = 0.0;
    if (has_prev && has_next) fill = (*s[i - 1] + *s[j]) / 2.0;
    else if (has_next) fill = *s[j];
    else if (has_prev) fill = *s[i - 1];
    for (std::size_t k = i; k < j; ++k) out[k] = fill;
    i = j;
  }
  return out;
}

/// (count, truth, pred) of the k largest off-diagonal cells, ties in
/// row-major class order.
inline std::vector<std::tuple<std::uint64_t, std::size_t, std::size_t>> top_offdiagonal(
    const std::array<std::array<std::uint64_t, 5>, 5>& c, std::size_t k) {
  std::vector<std::tuple<std::uint64_t, std::size_t, std::size_t>> cells;
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t p = 0; p < 5; ++p) {
      if (t != p && c[t][p] > 0) cells.emplace_back(c[t][p], t, p);
    }
  }
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
  });
  if (cells.size() > k) cells.resize(k);
  return cells;
}

/// Majority over votes (class indices), ties to the lowest index.
inline std::size_t tally(const std::vector<std::size_t>& votes, std::size_t classes) {
  std::vector<std::size_t> counts(classes, 0);
  for (auto v : votes) ++counts[v];
  std::size_t best = 0;
  for (std::size_t c = 1; c < classes; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

inline bool rel_close(double a, double b, double rel, double abs_floor = 1e-12) {
  return std::fabs(a - b) <= std::max(abs_floor, rel * std::max(std::fabs(a), std::fabs(b)));
}

inline std::vector<double> random_signal(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> offset(-2.0, 2.0);
  const double bias = offset(gen);
  std::vector<double> x(n);
  for (auto& v : x) v = bias + noise(gen);
  return x;
}

}  // namespace oracle
