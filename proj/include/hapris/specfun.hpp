#pragma once

// Real-argument special functions used by the coverage/capacity analysis.
//
// Everything here is a pure function of its arguments and safe to call from
// any number of threads.

#include <span>

namespace hapris::specfun {

/// Convergence control for the ascending hypergeometric series.
struct SeriesControl {
  double rel_tol = 1e-12;
  int max_terms = 10000;

  /// Throws DomainError unless rel_tol > 0 and max_terms >= 1.
  void validate() const;
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Digamma psi(x) for x > 0 (recurrence shift plus asymptotic expansion).
double digamma(double x);

/// Exponential integral E1(x) for x > 0.
double expint_e1(double x);

/// Upper incomplete gamma Gamma(a, x) for any real a and x >= 0.
///
/// For a <= 0 the value is reached by the recurrence
/// Gamma(a, x) = (Gamma(a + 1, x) - x^a e^{-x}) / a from the base case in
/// (0, 1] (or from E1 when a is an integer); for x past the continued-fraction
/// crossover the Legendre fraction is used directly for every a.
/// Gamma(a <= 0, 0) diverges and throws DomainError.
double upper_inc_gamma(double a, double x);

/// e^x * Gamma(a, x). Finite where Gamma(a, x) itself underflows, which is
/// the regime of the nearest-HAP distance moments (x ~ 1e4).
double upper_inc_gamma_scaled(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double reg_lower_inc_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without the subtraction so small tails keep full relative precision.
double reg_upper_inc_gamma(double a, double x);

/// Kummer's confluent hypergeometric function 1F1(a; b; z).
double kummer_1f1(double a, double b, double z, const SeriesControl& ctl = {});

/// ln 1F1(a; b; z) for a, b > 0 and z >= 0 (all series terms positive).
/// Summed in the log domain so large z does not overflow.
double log_kummer_1f1(double a, double b, double z, const SeriesControl& ctl = {});

/// 1F2(a; b1, b2; z) by ascending series.
double hyp_1f2(double a, double b1, double b2, double z, const SeriesControl& ctl = {});

/// 2F3(a1, a2; b1, b2, b3; z) by ascending series.
double hyp_2f3(double a1, double a2, double b1, double b2, double b3, double z,
               const SeriesControl& ctl = {});

/// Result of a generalized hypergeometric series with its conditioning.
struct SeriesValue {
  double value = 0.0;
  /// max |term| / |sum|; eps * condition bounds the relative rounding error.
  double condition = 1.0;
  int terms = 0;
};

/// pFq(upper; lower; z) ascending series. Stops once |term| <= rel_tol * |sum|
/// holds for three consecutive terms. Throws SingularParameterError for a
/// lower parameter near a non-positive integer, NumericalError when
/// max_terms is exhausted or when cancellation leaves fewer than ~8
/// significant digits.
SeriesValue hypergeometric_pfq(std::span<const double> upper, std::span<const double> lower,
                               double z, const SeriesControl& ctl = {});

}  // namespace hapris::specfun
