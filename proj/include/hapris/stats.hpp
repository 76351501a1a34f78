#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace hapris {

/// Random stream used by every sampler.
using Rng = std::mt19937_64;

/// Independent substream for (seed, index). Trials and sampler checks derive
/// their streams from this, so results never depend on execution order.
Rng make_substream(std::uint64_t seed, std::uint64_t index);

/// Uniform on [0, 1).
inline double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

/// Streaming central moments up to order four, mergeable in a fixed order
/// (Pebay's pairwise update). Same inputs in the same merge order give
/// bit-identical results.
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance.
  double variance() const;
  double std_error_of_mean() const;
  /// Large-sample standard error of the sample variance, sqrt((m4 - m2^2) / n).
  double std_error_of_variance() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

/// One-sample Kolmogorov-Smirnov statistic. `sorted` must be ascending.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic. Both inputs must be ascending.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Histogram {
  double lo = 0.0;
  double bin_width = 0.0;
  /// Empirical density per bin (integrates to the sampled fraction).
  std::vector<double> density;
};

Histogram make_histogram(std::span<const double> samples, double lo, double hi, int bins,
                         std::uint64_t normalizer);

}  // namespace hapris
