#include "hapris/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hapris/errors.hpp"

namespace hapris::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

// Below this many significant digits a series result is not worth returning.
constexpr double kMaxRelativeRounding = 1e-8;

bool is_nonpositive_integer_near(double b, double tol) {
  const double n = std::round(b);
  return n <= 0.0 && std::abs(b - n) < tol;
}

// Stirling series for ln Gamma(x), x >= 10.
double ln_gamma_stirling(double x) {
  // B_{2k} / (2k (2k - 1)) for k = 1..7
  static constexpr std::array<double, 7> kCoeffs = {
      1.0 / 12.0,           -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0,         -691.0 / 360360.0, 1.0 / 156.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;
  for (double c : kCoeffs) {
    series += c * power;
    power *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

// P(a, x) by its power series; valid (and fast) for x < a + 1.
double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      return sum * std::exp(a * std::log(x) - x - ln_gamma(a));
    }
  }
  throw NumericalError("incomplete gamma series did not converge for a=" + std::to_string(a) +
                       ", x=" + std::to_string(x));
}

// Legendre continued fraction: returns h with Gamma(a, x) = x^a e^{-x} h.
// Converges for every real a once x > 0; evaluated by modified Lentz.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete gamma continued fraction did not converge for a=" +
                       std::to_string(a) + ", x=" + std::to_string(x));
}

bool use_fraction(double a, double x) { return x > 1.0 && x >= a + 1.0; }

// E1(x) for 0 < x <= 1 by its power series.
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < kMaxIterations; ++k) {
    term *= -x / k;
    const double contrib = -term / k;
    sum += contrib;
    if (std::abs(contrib) < std::abs(sum) * kEps) {
      return -std::numbers::egamma - std::log(x) + sum;
    }
  }
  throw NumericalError("E1 series did not converge");
}

// Gamma(a, x) for a <= 0, 0 < x, outside the continued-fraction region.
double upper_negative_by_recurrence(double a, double x) {
  double a_cur = 0.0;
  double value = 0.0;
  const double n_steps = std::ceil(-a);
  if (a == std::round(a)) {
    a_cur = 0.0;
    value = expint_e1(x);
  } else {
    a_cur = a + n_steps;  // in (0, 1)
    value = std::exp(ln_gamma(a_cur)) * (1.0 - lower_series(a_cur, x));
  }
  const double ex = std::exp(-x);
  while (a_cur - 1.0 >= a - 0.5) {
    const double next = a_cur - 1.0;
    value = (value - std::pow(x, next) * ex) / next;
    a_cur = next;
  }
  return value;
}

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("SeriesControl.rel_tol must be > 0");
  if (max_terms < 1) throw DomainError("SeriesControl.max_terms must be >= 1");
}

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("ln_gamma requires x > 0, got " + std::to_string(x));
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x >= 10.0) return ln_gamma_stirling(x);
  double prod = 1.0;
  double y = x;
  while (y < 10.0) {
    prod *= y;
    y += 1.0;
  }
  return ln_gamma_stirling(y) - std::log(prod);
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("digamma requires x > 0, got " + std::to_string(x));
  }
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // -sum B_{2k} / (2k x^{2k}) for k = 1..7, Horner in 1/x^2
  const double tail =
      inv2 * (-1.0 / 12.0 +
              inv2 * (1.0 / 120.0 +
                      inv2 * (-1.0 / 252.0 +
                              inv2 * (1.0 / 240.0 +
                                      inv2 * (-1.0 / 132.0 +
                                              inv2 * (691.0 / 32760.0 + inv2 * (-1.0 / 12.0)))))));
  return shift + std::log(x) - 0.5 / x + tail;
}

double expint_e1(double x) {
  if (!(x > 0.0)) throw DomainError("E1 requires x > 0, got " + std::to_string(x));
  if (x <= 1.0) return e1_series(x);
  return std::exp(-x) * upper_fraction(0.0, x);
}

double upper_inc_gamma_scaled(double a, double x) {
  if (!(x >= 0.0) || std::isnan(a)) {
    throw DomainError("upper_inc_gamma requires x >= 0, got " + std::to_string(x));
  }
  if (x == 0.0) {
    if (a <= 0.0) throw DomainError("Gamma(a, 0) diverges for a <= 0");
    return std::exp(ln_gamma(a));
  }
  if (use_fraction(a, x)) return std::exp(a * std::log(x)) * upper_fraction(a, x);
  if (a > 0.0) return std::exp(x + ln_gamma(a)) * (1.0 - lower_series(a, x));
  return std::exp(x) * upper_negative_by_recurrence(a, x);
}

double upper_inc_gamma(double a, double x) {
  if (!(x >= 0.0) || std::isnan(a)) {
    throw DomainError("upper_inc_gamma requires x >= 0, got " + std::to_string(x));
  }
  if (x == 0.0) return upper_inc_gamma_scaled(a, x);
  if (use_fraction(a, x)) return std::exp(a * std::log(x) - x) * upper_fraction(a, x);
  if (a > 0.0) return std::exp(ln_gamma(a)) * (1.0 - lower_series(a, x));
  return upper_negative_by_recurrence(a, x);
}

double reg_lower_inc_gamma(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw DomainError("reg_lower_inc_gamma requires a > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - std::exp(a * std::log(x) - x - ln_gamma(a)) * upper_fraction(a, x);
}

double reg_upper_inc_gamma(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw DomainError("reg_upper_inc_gamma requires a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return std::exp(a * std::log(x) - x - ln_gamma(a)) * upper_fraction(a, x);
}

SeriesValue hypergeometric_pfq(std::span<const double> upper, std::span<const double> lower,
                               double z, const SeriesControl& ctl) {
  ctl.validate();
  for (double b : lower) {
    if (is_nonpositive_integer_near(b, 1e-9)) {
      throw SingularParameterError("hypergeometric lower parameter " + std::to_string(b) +
                                   " is at a non-positive integer");
    }
  }
  SeriesValue out{1.0, 1.0, 1};
  if (z == 0.0) return out;

  double term = 1.0;
  double sum = 1.0;
  double max_abs = 1.0;
  int small_run = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    double ratio = z / (k + 1.0);
    for (double a : upper) ratio *= a + k;
    for (double b : lower) ratio /= b + k;
    term *= ratio;
    sum += term;
    max_abs = std::max(max_abs, std::abs(term));
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (++small_run >= 3) {
        out.value = sum;
        out.terms = k + 2;
        out.condition = max_abs / std::abs(sum);
        if (!(kEps * out.condition <= kMaxRelativeRounding)) {
          throw NumericalError("hypergeometric series lost precision to cancellation (z=" +
                               std::to_string(z) + ")");
        }
        return out;
      }
    } else {
      small_run = 0;
    }
    if (!std::isfinite(sum)) break;
  }
  throw NumericalError("hypergeometric series did not converge within " +
                       std::to_string(ctl.max_terms) + " terms (z=" + std::to_string(z) + ")");
}

double log_kummer_1f1(double a, double b, double z, const SeriesControl& ctl) {
  ctl.validate();
  if (!(a > 0.0) || !(b > 0.0) || !(z >= 0.0)) {
    throw DomainError("log_kummer_1f1 requires a > 0, b > 0, z >= 0");
  }
  if (z == 0.0) return 0.0;
  const double log_z = std::log(z);
  const double log_tol = std::log(ctl.rel_tol);
  double log_term = 0.0;
  double log_sum = 0.0;
  int small_run = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    log_term += std::log(a + k) - std::log(b + k) + log_z - std::log(k + 1.0);
    const double hi = std::max(log_sum, log_term);
    const double lo = std::min(log_sum, log_term);
    log_sum = hi + std::log1p(std::exp(lo - hi));
    if (log_term - log_sum <= log_tol) {
      if (++small_run >= 3) return log_sum;
    } else {
      small_run = 0;
    }
  }
  throw NumericalError("1F1 log-domain series did not converge (z=" + std::to_string(z) + ")");
}

double kummer_1f1(double a, double b, double z, const SeriesControl& ctl) {
  ctl.validate();
  if (is_nonpositive_integer_near(b, 1e-9)) {
    throw SingularParameterError("1F1 lower parameter " + std::to_string(b) +
                                 " is at a non-positive integer");
  }
  if (z == 0.0) return 1.0;
  if (z > 50.0 && a > 0.0 && b > 0.0) return std::exp(log_kummer_1f1(a, b, z, ctl));
  if (z < 0.0) {
    // Kummer transformation to a positive argument.
    const std::array<double, 1> up{b - a};
    const std::array<double, 1> lo{b};
    return std::exp(z) * hypergeometric_pfq(up, lo, -z, ctl).value;
  }
  const std::array<double, 1> up{a};
  const std::array<double, 1> lo{b};
  return hypergeometric_pfq(up, lo, z, ctl).value;
}

double hyp_1f2(double a, double b1, double b2, double z, const SeriesControl& ctl) {
  const std::array<double, 1> up{a};
  const std::array<double, 2> lo{b1, b2};
  return hypergeometric_pfq(up, lo, z, ctl).value;
}

double hyp_2f3(double a1, double a2, double b1, double b2, double b3, double z,
               const SeriesControl& ctl) {
  const std::array<double, 2> up{a1, a2};
  const std::array<double, 3> lo{b1, b2, b3};
  return hypergeometric_pfq(up, lo, z, ctl).value;
}

}  // namespace hapris::specfun
