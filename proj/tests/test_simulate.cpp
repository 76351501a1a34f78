#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/expint.hpp>

#include "doctest.h"
#include "hapris/errors.hpp"
#include "hapris/simulate.hpp"
#include "hapris/validation.hpp"

using namespace hapris;
using namespace hapris::sim;

namespace {

McConfig config(std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
  McConfig mc;
  mc.num_trials = trials;
  mc.seed = seed;
  mc.threads = threads;
  return mc;
}

}  // namespace

TEST_CASE("fixed-geometry direct link has an exponential SNR") {
  auto sp = analytic::urban_defaults(0);
  auto mc = config(500000, 11);
  mc.geometry_override = GeometryOverride{20e3, std::nullopt};
  const double r_u = std::hypot(20e3, sp.deployment.h_hap);
  const double mean = std::pow(r_u, -3.0);

  const TrialKernel kernel(sp, mc);
  std::vector<double> x;
  x.reserve(mc.num_trials);
  for (std::uint64_t i = 0; i < mc.num_trials; ++i) {
    Rng rng = make_substream(mc.seed, i);
    x.push_back(kernel(rng).snr / sp.rho0());
  }
  std::sort(x.begin(), x.end());
  CHECK(ks_statistic(x, [&](double v) { return -std::expm1(-v / mean); }) < 0.005);

  // Ergodic capacity of an exponential SNR: e^{1/m} E1(1/m) / ln 2.
  SimulationRequest req;
  const std::vector<double> rho0{1e13, 1e14, 1e15};
  req.capacity_rho0 = rho0;
  mc.num_trials = 200000;
  const auto s = simulate(sp, mc, req);
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    const double m = rho0[i] * mean;
    const double ref = std::exp(1.0 / m) * boost::math::expint(1, 1.0 / m) / std::numbers::ln2;
    CAPTURE(m);
    CHECK(std::abs(s.capacity[i].bits.value - ref) < 4.0 * s.capacity[i].bits.std_error);
  }
}

TEST_CASE("fixed-geometry cascade reproduces the element-sum moments") {
  auto sp = analytic::urban_defaults(50);
  sp.direct_link = false;
  auto mc = config(100000, 12);
  mc.geometry_override = GeometryOverride{1000.0, 40.0};
  const auto& d = sp.deployment;
  const double r_q = std::sqrt(1000.0 * 1000.0 + 40.0 * 40.0 + std::pow(d.h_hap - d.h_ris, 2));
  const double gain = std::pow(r_q, -1.0) * std::pow(std::hypot(40.0, d.h_ris), -1.5);
  const auto s = simulate(sp, mc, {});
  CHECK(s.void_trials == 0);
  CHECK(std::abs(s.mean_A.value - fading::nu_mean(sp.cascade) * gain) < 4.0 * s.mean_A.std_error);
  CHECK(std::abs(s.var_A.value - fading::nu_variance(sp.cascade) * gain * gain) < 4.0 * s.var_A.std_error);
  CHECK(s.hap_ris_gain.value == doctest::Approx(std::pow(r_q, -1.0)).epsilon(1e-12));
}

TEST_CASE("simulated moments agree with the analysis") {
  for (int l : {0, 50}) {
    CAPTURE(l);
    const auto sp = analytic::urban_defaults(l);
    const auto cs = analytic::channel_stats(sp);
    const auto s = simulate(sp, config(50000, 21), {});
    CHECK(std::abs(s.mean_A.value - cs.mean_A) < 4.0 * s.mean_A.std_error);
    CHECK(std::abs(s.var_A.value - cs.var_A) < 4.0 * s.var_A.std_error);
    CHECK(s.mean_A.ci_halfwidth == doctest::Approx(kZ95 * s.mean_A.std_error));
  }
}

TEST_CASE("coverage and capacity estimates are ordered") {
  const std::vector<double> th{0.0, 1.0, 10.0, 100.0, 1000.0};
  const auto sp50 = analytic::urban_defaults(50);
  const auto sp100 = analytic::urban_defaults(100);
  const auto c50 = estimate_coverage(sp50, config(20000, 31), th);
  const auto c100 = estimate_coverage(sp100, config(20000, 31), th);
  CHECK(c50[0].p_cov == 1.0);
  for (std::size_t i = 1; i < th.size(); ++i) {
    CHECK(c50[i].p_cov <= c50[i - 1].p_cov);
    CHECK(c100[i].p_cov <= c100[i - 1].p_cov);
    CHECK(c50[i].ci_halfwidth == doctest::Approx(kZ95 * std::sqrt(c50[i].p_cov * (1.0 - c50[i].p_cov) / 20000.0)));
  }

  SimulationRequest req;
  req.capacity_rho0 = {1e10, 1e12, 1e14, 1e16};
  const auto a = simulate(sp50, config(20000, 32), req);
  const auto b = simulate(sp100, config(20000, 32), req);
  for (std::size_t i = 0; i < req.capacity_rho0.size(); ++i) {
    if (i > 0) CHECK(a.capacity[i].bits.value > a.capacity[i - 1].bits.value);
    CHECK(b.capacity[i].bits.value > a.capacity[i].bits.value);
  }
  CHECK(estimate_capacity(sp50, config(20000, 32)).value ==
        doctest::Approx(simulate(sp50, config(20000, 32), {}).capacity[0].bits.value).epsilon(1e-15));
}

TEST_CASE("distance diagnostics match the analytic laws") {
  const auto sp = analytic::urban_defaults(0);
  const auto d = empirical_distance_diagnostics(sp, config(100000, 41));
  CHECK(d.trials == 100000);
  CHECK(d.ks_w_hap < 0.008);
  CHECK(d.ks_w_g < 0.008);
  const double se = std::sqrt(d.void_probability * (1.0 - d.void_probability) / 100000.0);
  CHECK(std::abs(d.void_frequency - d.void_probability) < 4.0 * se);
  double mass = 0.0;
  for (double v : d.w_hap.density) mass += v * d.w_hap.bin_width;
  CHECK(mass == doctest::Approx(0.999).epsilon(2e-3));
}

TEST_CASE("same seed, same summary, any thread count") {
  const auto sp = analytic::urban_defaults(50);
  SimulationRequest req;
  req.thresholds = {1.0, 10.0};
  req.keep_distances = true;
  const auto one = simulate(sp, config(9000, 51, 1), req);
  const auto three = simulate(sp, config(9000, 51, 3), req);
  const auto again = simulate(sp, config(9000, 51, 1), req);
  CHECK(validation::same_summary(one, three));
  CHECK(validation::same_summary(one, again));
  CHECK(one.w_g == three.w_g);
  const auto other = simulate(sp, config(9000, 52, 1), req);
  CHECK_FALSE(validation::same_summary(one, other));

  Rng r1 = make_substream(51, 7), r2 = make_substream(51, 7);
  CHECK(run_trial(sp, config(1, 51), r1).snr == run_trial(sp, config(1, 51), r2).snr);
}

TEST_CASE("explicit building scenes run end to end") {
  auto sp = analytic::urban_defaults(50);
  auto mc = config(3000, 61);
  mc.visibility = geometry::Visibility::explicit_scene;
  const auto s = simulate(sp, mc, {});
  CHECK(s.trials == 3000);
  CHECK(s.void_trials < 3000);
  CHECK(s.mean_A.value > 0.0);
}

TEST_CASE("invalid simulation settings are rejected") {
  const auto sp = analytic::urban_defaults(50);
  CHECK_THROWS_AS(simulate(sp, config(0, 1), {}), DomainError);
  auto mc = config(10, 1);
  mc.window_radius = -5.0;
  CHECK_THROWS_AS(simulate(sp, mc, {}), DomainError);
}

TEST_CASE("simulated capacity tracks the closed form at the reference") {
  // Gamma moment matching costs well under 2% here.
  for (int l : {50, 100}) {
    CAPTURE(l);
    const auto sp = analytic::urban_defaults(l);
    const double an = analytic::ergodic_capacity_guarded(analytic::channel_stats(sp), sp.rho0()).bits;
    const auto mc = estimate_capacity(sp, config(30000, 71));
    CHECK(std::abs(mc.value - an) < 0.02 * an + mc.ci_halfwidth);
  }
}
