#include "hapris/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "hapris/errors.hpp"
#include "hapris/specfun.hpp"

namespace hapris::analytic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Assembled {
  MeanParts mean;
  double var = 0.0;
};

Assembled assemble(const SystemParams& sp) {
  sp.validate();
  const auto& dep = sp.deployment;
  const auto& pl = sp.pathloss;
  Assembled out;

  if (sp.cascade.num_elements > 0) {
    const double h_q = dep.h_hap - dep.h_ris;
    const double rq1 = geometry::moment_r(1.0, pl.hap_ris, h_q, dep.lambda_hap);
    const double rg1 = geometry::moment_rg(1.0, pl.ris_user, dep.h_ris, dep.mu_ris, sp.blockage());
    const double rq2 = geometry::moment_r(2.0, pl.hap_ris, h_q, dep.lambda_hap);
    const double rg2 = geometry::moment_rg(2.0, pl.ris_user, dep.h_ris, dep.mu_ris, sp.blockage());
    out.mean.p1 = fading::nu_mean(sp.cascade) * rq1 * rg1;
    out.var += fading::nu_second_moment(sp.cascade) * rq2 * rg2 - out.mean.p1 * out.mean.p1;
  }
  if (sp.direct_link) {
    const double ru1 = geometry::moment_r(1.0, pl.hap_user, dep.h_hap, dep.lambda_hap);
    const double ru2 = geometry::moment_r(2.0, pl.hap_user, dep.h_hap, dep.lambda_hap);
    out.mean.p2 = ru1 * fading::kappa_mu_moment(sp.direct, 1.0);
    // E|u|^2 = 1 under the unit-power normalization.
    out.var += ru2 - out.mean.p2 * out.mean.p2;
  }
  out.mean.mean_A = out.mean.p1 + out.mean.p2;
  return out;
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) < tol; }

}  // namespace

void SystemParams::validate() const {
  deployment.validate();
  buildings.blockage.validate();
  cascade.validate();
  for (double e : {pathloss.hap_ris, pathloss.ris_user, pathloss.hap_user}) {
    if (!(e >= 2.0) || !std::isfinite(e)) throw DomainError("path-loss exponents must be >= 2");
  }
  if (!(tx_power_w > 0.0) || !(noise_power_w > 0.0)) {
    throw DomainError("transmit and noise powers must be > 0");
  }
}

SystemParams urban_defaults(int num_elements) {
  SystemParams sp;
  sp.deployment.lambda_hap = 5e-6;
  sp.deployment.mu_ris = 50e-6;
  sp.deployment.h_hap = 50e3;
  sp.deployment.h_ris = 50.0;
  sp.buildings.blockage = geometry::BlockageParams::from_buildings(200e-6, 25.0, 25.0);
  sp.cascade.num_elements = num_elements;
  sp.cascade.hap_ris = fading::KappaMuParams(2.0, 1.0);
  sp.cascade.ris_user = fading::KappaMuParams(3.0, 1.0);
  sp.direct = fading::KappaMuParams(0.0, 1.0);
  sp.pathloss = {2.0, 3.0, 3.0};
  sp.tx_power_w = 10.0;
  sp.noise_power_w = dbm_to_watts(-92.0);
  return sp;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

ChannelStats ChannelStats::from_moments(double mean_A, double var_A, double p1, double p2) {
  if (!(mean_A > 0.0)) throw NumericalError("combined channel mean must be > 0");
  if (!(var_A > 0.0)) {
    throw NumericalError("combined channel variance is not positive (" + std::to_string(var_A) +
                         "); the moments are inconsistent");
  }
  ChannelStats cs;
  cs.mean_A = mean_A;
  cs.var_A = var_A;
  cs.alpha = mean_A * mean_A / var_A;
  cs.beta = var_A / mean_A;
  cs.p1 = p1;
  cs.p2 = p2;
  return cs;
}

MeanParts mean_abs_A(const SystemParams& sp) { return assemble(sp).mean; }

double var_abs_A(const SystemParams& sp) {
  const double v = assemble(sp).var;
  if (!(v > 0.0)) throw NumericalError("combined channel variance is not positive");
  return v;
}

ChannelStats channel_stats(const SystemParams& sp) {
  const Assembled a = assemble(sp);
  return ChannelStats::from_moments(a.mean.mean_A, a.var, a.mean.p1, a.mean.p2);
}

double amplitude_pdf(double a, const ChannelStats& cs) {
  if (!(a >= 0.0)) throw DomainError("amplitude must be >= 0");
  if (a == 0.0) return cs.alpha < 1.0 ? std::numeric_limits<double>::infinity()
                                      : (cs.alpha == 1.0 ? 1.0 / cs.beta : 0.0);
  return std::exp((cs.alpha - 1.0) * std::log(a) - a / cs.beta - cs.alpha * std::log(cs.beta) -
                  specfun::ln_gamma(cs.alpha));
}

double snr_pdf(double x, const ChannelStats& cs, double rho0) {
  if (!(x >= 0.0)) throw DomainError("SNR must be >= 0");
  const double a = cs.alpha;
  if (x == 0.0) {
    if (a < 2.0) return std::numeric_limits<double>::infinity();
    if (a > 2.0) return 0.0;
  }
  const double log_norm =
      -std::log(2.0) - a * std::log(cs.beta) - specfun::ln_gamma(a) - 0.5 * a * std::log(rho0);
  const double log_x = x == 0.0 ? 0.0 : 0.5 * (a - 2.0) * std::log(x);
  return std::exp(log_norm + log_x - std::sqrt(x / (cs.beta * cs.beta * rho0)));
}

double coverage_probability(double rho_th, const ChannelStats& cs, double rho0) {
  if (!(rho_th >= 0.0)) throw DomainError("SNR threshold must be >= 0");
  return specfun::reg_upper_inc_gamma(cs.alpha, std::sqrt(rho_th / (rho0 * cs.beta * cs.beta)));
}

double ergodic_capacity(const ChannelStats& cs, double rho0) {
  const double a = cs.alpha;
  if (near_integer(a, 1e-3)) {
    throw NearPoleError("closed-form capacity is singular near integer alpha=" + std::to_string(a));
  }
  const double c = 1.0 / (cs.beta * cs.beta * rho0);
  const double z = -0.25 * c;
  const double log_c = std::log(c);

  const std::array<double, 1> up1{0.5 * a};
  const std::array<double, 2> lo1{0.5, 1.0 + 0.5 * a};
  const auto f12 = specfun::hypergeometric_pfq(up1, lo1, z);
  const double t1 = std::exp(std::log(kPi) - std::log(a) - specfun::ln_gamma(a) + 0.5 * a * log_c) /
                    std::sin(0.5 * kPi * a) * f12.value;

  // Gamma(alpha - 2) / Gamma(alpha) = 1 / ((alpha - 1)(alpha - 2)), valid for alpha < 2 too.
  const double gamma_ratio = 1.0 / ((a - 1.0) * (a - 2.0));
  const std::array<double, 2> up2{1.0, 1.0};
  const std::array<double, 3> lo2{2.0, 1.5 - 0.5 * a, 2.0 - 0.5 * a};
  const auto f23 = specfun::hypergeometric_pfq(up2, lo2, z);
  const double t2 = gamma_ratio * c * f23.value;

  const double poly = 2.0 - a - 2.0 * a * a + a * a * a;
  const double t3_log = poly * gamma_ratio * (log_c - 2.0 * specfun::digamma(a)) / (1.0 + a);
  const std::array<double, 1> up3{0.5 + 0.5 * a};
  const std::array<double, 2> lo3{1.5, 1.5 + 0.5 * a};
  const auto f12b = specfun::hypergeometric_pfq(up3, lo3, z);
  const double t3_series =
      std::exp(std::log(kPi) + 0.5 * (1.0 + a) * log_c - specfun::ln_gamma(a)) / (1.0 + a) /
      std::cos(0.5 * kPi * a) * f12b.value;

  const double nats = t1 + t2 - t3_log - t3_series;
  const double rounding = kEps * (std::abs(t1) * f12.condition + std::abs(t2) * f23.condition +
                                  std::abs(t3_log) * 4.0 + std::abs(t3_series) * f12b.condition);
  if (!std::isfinite(nats) || rounding > 1e-9 * std::abs(nats)) {
    throw NumericalError("closed-form capacity is ill-conditioned at alpha=" + std::to_string(a) +
                         ", 1/(beta^2 rho0)=" + std::to_string(c));
  }
  if (!(nats > 0.0)) throw NumericalError("closed-form capacity evaluated to a non-positive value");
  return nats / std::numbers::ln2;
}

double expect_over_snr(const std::function<double(double)>& g, const ChannelStats& cs,
                       double rho0, const quad::QuadControl& ctl) {
  // SNR = rho0 beta^2 S^2 with S ~ Gamma(alpha, 1).
  const double a = cs.alpha;
  const double k = rho0 * cs.beta * cs.beta;
  const double log_gamma_a = specfun::ln_gamma(a);

  // S in [0, 1] through S = v^{1/alpha}, which absorbs the S^{alpha-1} factor.
  auto head = [&](double v) {
    const double s = std::pow(v, 1.0 / a);
    return g(k * s * s) * std::exp(-s);
  };
  const double head_value =
      quad::integrate(head, 0.0, 1.0, ctl).value * std::exp(-std::log(a) - log_gamma_a);

  auto tail = [&](double s) {
    return g(k * s * s) * std::exp((a - 1.0) * std::log(s) - s - log_gamma_a);
  };
  const double spread = std::sqrt(a);
  const double s_hi = a + 40.0 * spread + 60.0;
  std::vector<double> cuts{1.0, s_hi};
  for (double c : {a - 5.0 * spread, a, a + 5.0 * spread}) {
    if (c > 1.0 && c < s_hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  const double tail_value = quad::integrate(tail, cuts, ctl).value;
  return head_value + tail_value;
}

double capacity_by_quadrature(const ChannelStats& cs, double rho0) {
  return expect_over_snr([](double x) { return std::log1p(x) / std::numbers::ln2; }, cs, rho0);
}

CapacityValue ergodic_capacity_guarded(const ChannelStats& cs, double rho0) {
  try {
    return {ergodic_capacity(cs, rho0), CapacityMethod::closed_form};
  } catch (const NumericalError&) {
    return {capacity_by_quadrature(cs, rho0), CapacityMethod::quadrature};
  } catch (const SingularParameterError&) {
    return {capacity_by_quadrature(cs, rho0), CapacityMethod::quadrature};
  }
}

}  // namespace hapris::analytic
