#include "hapris/fading.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hapris/errors.hpp"
#include "hapris/specfun.hpp"

namespace hapris::fading {

KappaMuParams::KappaMuParams(double kappa, double mu) : kappa_(kappa), mu_(mu) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError("kappa must be >= 0, got " + std::to_string(kappa));
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("mu must be > 0, got " + std::to_string(mu));
  }
}

double kappa_mu_moment(const KappaMuParams& p, double t) {
  if (!(t >= 0.0)) throw DomainError("kappa_mu_moment requires t >= 0");
  const double k = p.kappa();
  const double m = p.mu();
  const double half_t = 0.5 * t;
  const double log_value = specfun::ln_gamma(m + half_t) - k * m - specfun::ln_gamma(m) -
                           half_t * std::log((1.0 + k) * m) +
                           specfun::log_kummer_1f1(m + half_t, m, k * m);
  return std::exp(log_value);
}

double kappa_mu_cdf(const KappaMuParams& p, double x) {
  if (!(x > 0.0)) return 0.0;
  const double lam = p.kappa() * p.mu();
  const double y = (1.0 + p.kappa()) * p.mu() * x * x;
  if (lam == 0.0) return specfun::reg_lower_inc_gamma(p.mu(), y);
  // Sum outward from the Poisson mode so the weights never underflow early.
  const auto mode = static_cast<long>(std::floor(lam));
  auto weight = [&](long j) {
    return std::exp(static_cast<double>(j) * std::log(lam) - lam - specfun::ln_gamma(j + 1.0));
  };
  double sum = 0.0;
  for (long j = mode;; ++j) {
    const double w = weight(j);
    sum += w * specfun::reg_lower_inc_gamma(p.mu() + static_cast<double>(j), y);
    if (w < 1e-17 && j > mode) break;
  }
  for (long j = mode - 1; j >= 0; --j) {
    const double w = weight(j);
    sum += w * specfun::reg_lower_inc_gamma(p.mu() + static_cast<double>(j), y);
    if (w < 1e-17) break;
  }
  return std::min(1.0, sum);
}

double sample_kappa_mu(const KappaMuParams& p, Rng& rng) {
  const double km = p.kappa() * p.mu();
  int extra = 0;
  if (km > 0.0) {
    std::poisson_distribution<int> poisson(km);
    extra = poisson(rng);
  }
  std::gamma_distribution<double> power(p.mu() + extra, 1.0 / ((1.0 + p.kappa()) * p.mu()));
  return std::sqrt(power(rng));
}

void CascadeParams::validate() const {
  if (num_elements < 0) throw DomainError("number of reflecting elements must be >= 0");
}

double nu_mean(const CascadeParams& c) {
  c.validate();
  if (c.num_elements == 0) return 0.0;
  return c.num_elements * kappa_mu_moment(c.hap_ris, 1.0) * kappa_mu_moment(c.ris_user, 1.0);
}

double nu_second_moment(const CascadeParams& c) {
  c.validate();
  const double l = c.num_elements;
  if (l == 0.0) return 0.0;
  const double pair = kappa_mu_moment(c.hap_ris, 1.0) * kappa_mu_moment(c.ris_user, 1.0);
  return (l * l - l) * pair * pair + l;
}

double nu_variance(const CascadeParams& c) {
  const double m = nu_mean(c);
  return nu_second_moment(c) - m * m;
}

double sample_nu(const CascadeParams& c, Rng& rng) {
  double sum = 0.0;
  for (int l = 0; l < c.num_elements; ++l) {
    const double q = sample_kappa_mu(c.hap_ris, rng);
    sum += q * sample_kappa_mu(c.ris_user, rng);
  }
  return sum;
}

}  // namespace hapris::fading
