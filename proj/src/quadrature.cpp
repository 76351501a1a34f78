#include "hapris/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "hapris/errors.hpp"

namespace hapris::quad {

namespace {

// Kronrod abscissae/weights (QUADPACK qk15); odd indices are the Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadResult integrate(const Integrand& f, std::span<const double> breakpoints,
                     const QuadControl& ctl) {
  if (breakpoints.size() < 2) throw DomainError("integrate needs at least two breakpoints");
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] == breakpoints[i]) continue;
    Segment s = kronrod15(f, breakpoints[i], breakpoints[i + 1]);
    total += s.value;
    error += s.error;
    heap.push(s);
  }
  int intervals = static_cast<int>(heap.size());
  auto converged = [&] {
    return error <= std::max(ctl.abs_tol, ctl.rel_tol * std::abs(total));
  };
  while (!converged()) {
    if (intervals >= ctl.max_intervals || heap.empty()) {
      throw NumericalError("adaptive quadrature did not converge: estimate " +
                           std::to_string(total) + " +/- " + std::to_string(error));
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NumericalError("adaptive quadrature exhausted floating-point resolution");
    }
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift of the incremental updates.
  double resum = 0.0;
  double reerr = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    reerr += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(resum)) throw NumericalError("quadrature produced a non-finite value");
  return {resum, reerr, intervals};
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadControl& ctl) {
  const std::array<double, 2> ends{a, b};
  return integrate(f, ends, ctl);
}

QuadResult integrate_to_infinity(const Integrand& f, double a, const QuadControl& ctl) {
  auto mapped = [&f, a](double t) {
    const double one_minus = 1.0 - t;
    return f(a + t / one_minus) / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, ctl);
}

}  // namespace hapris::quad
