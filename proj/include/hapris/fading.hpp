#pragma once

#include "hapris/stats.hpp"

namespace hapris::fading {

/// kappa-mu fading parameters for one link, normalized to E[X^2] = 1.
/// kappa is the dominant-to-scattered power ratio, mu the cluster count.
/// Rician with K-factor k is {k, 1}; Rayleigh is {0, 1}.
class KappaMuParams {
 public:
  /// Throws DomainError unless kappa >= 0 and mu > 0.
  KappaMuParams(double kappa, double mu);

  double kappa() const { return kappa_; }
  double mu() const { return mu_; }

  static KappaMuParams rayleigh() { return {0.0, 1.0}; }
  static KappaMuParams rician(double k) { return {k, 1.0}; }

 private:
  double kappa_;
  double mu_;
};

/// E[X^t] of the unit-power kappa-mu envelope,
///   Gamma(mu + t/2) e^{-kappa mu} 1F1(mu + t/2; mu; kappa mu)
///   / (Gamma(mu) ((1 + kappa) mu)^{t/2}),
/// assembled in the log domain.
double kappa_mu_moment(const KappaMuParams& p, double t);

/// Envelope CDF P(X <= x) as the Poisson(kappa mu) mixture of regularized
/// lower incomplete gammas P(mu + j, (1 + kappa) mu x^2).
double kappa_mu_cdf(const KappaMuParams& p, double x);

/// One envelope draw. X^2 is a Poisson(kappa mu) mixture of
/// Gamma(mu + J, 1 / ((1 + kappa) mu)), which covers non-integer mu.
double sample_kappa_mu(const KappaMuParams& p, Rng& rng);

/// L-element RIS cascade: nu = sum_l |q_l| |g_l| under optimal phase
/// alignment. L = 0 encodes the no-RIS baseline.
struct CascadeParams {
  int num_elements = 0;
  KappaMuParams hap_ris = KappaMuParams::rayleigh();
  KappaMuParams ris_user = KappaMuParams::rayleigh();

  void validate() const;
};

/// E[nu] = L E|q| E|g|.
double nu_mean(const CascadeParams& c);

/// E[nu^2] = (L^2 - L)(E|q| E|g|)^2 + L, using E|q|^2 = E|g|^2 = 1.
double nu_second_moment(const CascadeParams& c);

double nu_variance(const CascadeParams& c);

/// One draw of nu (sum of L envelope products).
double sample_nu(const CascadeParams& c, Rng& rng);

}  // namespace hapris::fading
