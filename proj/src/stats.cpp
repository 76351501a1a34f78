#include "hapris/stats.hpp"

#include <algorithm>
#include <cmath>

namespace hapris {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng make_substream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

void MomentAccumulator::add(double x) {
  MomentAccumulator one;
  one.n_ = 1;
  one.mean_ = x;
  merge(one);
}

void MomentAccumulator::merge(const MomentAccumulator& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double delta = o.mean_ - mean_;
  const double d_n = delta / n;
  const double d_n2 = d_n * d_n;

  const double m2 = m2_ + o.m2_ + delta * d_n * na * nb;
  const double m3 = m3_ + o.m3_ + delta * d_n2 * na * nb * (na - nb) +
                    3.0 * d_n * (na * o.m2_ - nb * m2_);
  const double m4 = m4_ + o.m4_ + delta * d_n2 * d_n * na * nb * (na * na - na * nb + nb * nb) +
                    6.0 * d_n2 * (na * na * o.m2_ + nb * nb * m2_) +
                    4.0 * d_n * (na * o.m3_ - nb * m3_);

  n_ += o.n_;
  mean_ += d_n * nb;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
}

double MomentAccumulator::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double MomentAccumulator::std_error_of_mean() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double MomentAccumulator::std_error_of_variance() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  const double c2 = m2_ / n;
  const double c4 = m4_ / n;
  return std::sqrt(std::max(0.0, c4 - c2 * c2) / n);
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

Histogram make_histogram(std::span<const double> samples, double lo, double hi, int bins,
                         std::uint64_t normalizer) {
  Histogram h;
  h.lo = lo;
  h.bin_width = (hi - lo) / bins;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
  for (double x : samples) {
    if (x < lo || x >= hi) continue;
    auto k = static_cast<std::size_t>((x - lo) / h.bin_width);
    counts[std::min(k, counts.size() - 1)]++;
  }
  h.density.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    h.density[k] = static_cast<double>(counts[k]) / (static_cast<double>(normalizer) * h.bin_width);
  }
  return h;
}

}  // namespace hapris
