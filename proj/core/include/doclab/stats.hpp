#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "doclab/rng.hpp"

namespace doclab {

double mean(std::span<const double> values);

/// Sample covariance (denominator n - 1); needs at least two values.
double sample_covariance(std::span<const double> a, std::span<const double> b);

/// Quantile with linear interpolation between order statistics (the common
/// plotting convention). `sorted` must be ascending and non-empty; q in [0,1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Bootstrap standard deviation of the sample mean (`resamples` resamples
/// with replacement, deterministic under the given stream).
double bootstrap_sigma_of_mean(std::span<const double> values, int resamples,
                               RngStream& rng);

/// Wilson score interval for a binomial proportion at normal quantile z
/// (z = 1.96 for a 95% interval).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};
Interval wilson_interval(std::int64_t hits, std::int64_t trials, double z);

}  // namespace doclab
