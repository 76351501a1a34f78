#pragma once

#include <functional>
#include <span>

namespace hapris::quad {

struct QuadControl {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]. Endpoints are never
/// evaluated, so integrable endpoint singularities are tolerated.
/// Throws NumericalError when the tolerance is not met within max_intervals.
QuadResult integrate(const Integrand& f, double a, double b, const QuadControl& ctl = {});

/// As integrate(), with the interval pre-split at the given interior points.
QuadResult integrate(const Integrand& f, std::span<const double> breakpoints,
                     const QuadControl& ctl = {});

/// Integral over [a, inf) via x = a + t / (1 - t).
QuadResult integrate_to_infinity(const Integrand& f, double a, const QuadControl& ctl = {});

}  // namespace hapris::quad
