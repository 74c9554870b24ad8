#include "doclab/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace doclab {

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("sample_covariance: need two equal-length samples of size >= 2");
  const double ma = mean(a);
  const double mb = mean(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - ma) * (b[i] - mb);
  return acc / static_cast<double>(a.size() - 1);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty input");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile_sorted: q outside [0,1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double bootstrap_sigma_of_mean(std::span<const double> values, int resamples,
                               RngStream& rng) {
  if (values.empty())
    throw std::invalid_argument("bootstrap_sigma_of_mean: empty input");
  if (resamples < 2)
    throw std::invalid_argument("bootstrap_sigma_of_mean: need >= 2 resamples");
  const std::uint64_t n = values.size();
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < resamples; ++r) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) acc += values[rng.next_below(n)];
    const double m = acc / static_cast<double>(n);
    sum += m;
    sum_sq += m * m;
  }
  const double mb = sum / resamples;
  const double var = (sum_sq - resamples * mb * mb) / (resamples - 1);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

Interval wilson_interval(std::int64_t hits, std::int64_t trials, double z) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be > 0");
  if (hits < 0 || hits > trials)
    throw std::invalid_argument("wilson_interval: hits outside [0, trials]");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

}  // namespace doclab
