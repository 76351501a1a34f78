#include "hapris/validation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "hapris/errors.hpp"
#include "hapris/fading.hpp"
#include "hapris/geometry.hpp"
#include "hapris/specfun.hpp"
#include "hapris/stats.hpp"

namespace hapris::validation {

namespace {

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <class... T>
std::string fmtn(const char* f, T... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

analytic::SystemParams with_elements(analytic::SystemParams sp, int l) {
  sp.cascade.num_elements = l;
  return sp;
}

std::vector<double> fig2_thresholds() {
  std::vector<double> out;
  for (int db = -10; db <= 30; ++db) out.push_back(analytic::db_to_linear(db));
  return out;
}

double relerr(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

std::vector<double> default_mu_ris_grid() {
  return {1e-6, 2e-6, 5e-6, 1e-5, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3};
}

std::vector<double> default_h_ris_grid() {
  return {2, 5, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 100, 125, 150, 200};
}

CheckResult check_db_roundtrip() {
  double worst = 0.0;
  for (int i = -2000; i <= 2000; ++i) {
    const double db = 0.137 * i;
    worst = std::max(worst, std::abs(analytic::linear_to_db(analytic::db_to_linear(db)) - db) /
                                std::max(1.0, std::abs(db)));
    const double lin = std::pow(10.0, 0.0113 * i);
    worst = std::max(worst, relerr(analytic::db_to_linear(analytic::linear_to_db(lin)), lin));
  }
  return {"db_roundtrip", worst <= 1e-12, fmt("worst relative error %.3g", worst)};
}

CheckResult check_kappa_mu_normalization() {
  double worst = 0.0;
  for (double k : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 20.0}) {
    for (double m : {0.5, 1.0, 1.5, 2.0, 3.0, 5.0}) {
      worst = std::max(worst, std::abs(fading::kappa_mu_moment({k, m}, 2.0) - 1.0));
    }
  }
  return {"kappa_mu_unit_power", worst <= 1e-10, fmt("max |E[X^2] - 1| = %.3g", worst)};
}

CheckResult check_kappa_mu_sampler(std::uint64_t draws, std::uint64_t seed) {
  struct Case {
    const char* name;
    fading::KappaMuParams p;
  };
  const Case cases[] = {{"rayleigh", fading::KappaMuParams::rayleigh()},
                        {"rician_k2", fading::KappaMuParams::rician(2.0)},
                        {"rician_k3", fading::KappaMuParams::rician(3.0)}};
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 0;
  for (const auto& c : cases) {
    Rng rng = make_substream(seed, stream++);
    std::vector<double> x(draws);
    for (auto& v : x) v = fading::sample_kappa_mu(c.p, rng);
    std::sort(x.begin(), x.end());
    double ks = 0.0;
    if (c.p.kappa() == 0.0) {
      ks = ks_statistic(x, [](double r) { return -std::expm1(-r * r); });
    } else {
      ks = ks_statistic(x, [&](double r) { return fading::kappa_mu_cdf(c.p, r); });
    }
    ok = ok && ks < 0.003;
    detail += fmtn("%s KS=%.4f ", c.name, ks);
  }
  return {"kappa_mu_sampler_ks", ok, detail};
}

CheckResult check_hap_moment_oracle() {
  double worst = 0.0;
  for (double t : {1.0, 2.0}) {
    for (double eta : {2.0, 3.0}) {
      for (double h : {20e3, 50e3}) {
        for (double lam : {1e-6, 5e-6}) {
          worst = std::max(worst, relerr(geometry::moment_r(t, eta, h, lam),
                                         geometry::moment_r_quadrature(t, eta, h, lam)));
        }
      }
    }
  }
  return {"hap_distance_moment_closed_form", worst <= 1e-8, fmt("worst relative error %.3g", worst)};
}

CheckResult check_visible_ris_mass(const analytic::SystemParams& sp) {
  const auto& b = sp.blockage();
  const double mu = sp.deployment.mu_ris;
  const double cut = b.upsilon > 0.0 ? 60.0 / b.upsilon : std::sqrt(60.0 / (mu * std::numbers::pi));
  std::vector<double> bp{0.0};
  for (double x = cut / 1024.0; x < cut; x *= 2.0) bp.push_back(x);
  bp.push_back(cut);
  bool nonneg = true;
  for (std::size_t i = 0; i <= 4000; ++i) {
    nonneg = nonneg && geometry::pdf_nearest_visible_ris(cut * static_cast<double>(i) / 4000.0, mu, b) >= 0.0;
  }
  const double mass = quad::integrate([&](double w) { return geometry::pdf_nearest_visible_ris(w, mu, b); },
                                      bp, {1e-13, 0.0, 4000})
                          .value;
  const double expected = 1.0 - geometry::void_probability(mu, b);
  const double err = std::abs(mass - expected);
  return {"visible_ris_density_mass", nonneg && err <= 1e-9,
          fmtn("mass %.12f, 1 - void %.12f, nonnegative %s", mass, expected, nonneg ? "yes" : "no")};
}

CheckResult check_snr_law_identities() {
  double worst_norm = 0.0, worst_cov = 0.0, worst_pdf = 0.0;
  bool monotone = true, at_zero = true;
  for (double alpha : {0.6, 1.0, 2.0, 3.3, 7.5}) {
    for (double beta_rho : {0.01, 1.0, 50.0}) {
      const double beta = 1e-6;
      const double rho0 = beta_rho / (beta * beta);
      const auto cs = analytic::ChannelStats::from_moments(alpha * beta, alpha * beta * beta);
      worst_norm = std::max(worst_norm, std::abs(analytic::expect_over_snr([](double) { return 1.0; }, cs, rho0) - 1.0));
      at_zero = at_zero && analytic::coverage_probability(0.0, cs, rho0) == 1.0;
      double prev = 1.0;
      for (int db = -30; db <= 40; ++db) {
        const double th = analytic::db_to_linear(db) * beta_rho;
        const double p = analytic::coverage_probability(th, cs, rho0);
        monotone = monotone && p <= prev;
        prev = p;
        const double gamma_cdf = specfun::reg_lower_inc_gamma(alpha, std::sqrt(th / rho0) / beta);
        worst_cov = std::max(worst_cov, std::abs(p + gamma_cdf - 1.0));
        const double via_amp = analytic::amplitude_pdf(std::sqrt(th / rho0), cs) / (2.0 * std::sqrt(rho0 * th));
        const double direct = analytic::snr_pdf(th, cs, rho0);
        if (via_amp > 1e-300) worst_pdf = std::max(worst_pdf, relerr(direct, via_amp));
      }
    }
  }
  const bool ok = worst_norm <= 1e-8 && worst_cov <= 1e-12 && worst_pdf <= 1e-12 && monotone && at_zero;
  return {"snr_law_identities", ok,
          fmtn("norm %.2g, |P_c + F - 1| %.2g, pdf transform %.2g, monotone %s, P(0)=1 %s", worst_norm,
               worst_cov, worst_pdf, monotone ? "yes" : "no", at_zero ? "yes" : "no")};
}

CheckResult check_capacity_closed_form() {
  double worst = 0.0;
  int evaluated = 0;
  std::string failures;
  for (double alpha : {0.7, 1.5, 2.5, 3.2, 4.6}) {
    for (double c : {1e-4, 1e-2, 0.5, 5.0}) {
      const double beta = 1e-6 * (1.0 + alpha / 10.0);
      const double rho0 = 1.0 / (c * beta * beta);
      const auto cs = analytic::ChannelStats::from_moments(alpha * beta, alpha * beta * beta);
      try {
        const double closed = analytic::ergodic_capacity(cs, rho0);
        worst = std::max(worst, relerr(closed, analytic::capacity_by_quadrature(cs, rho0)));
        ++evaluated;
      } catch (const std::exception& e) {
        failures += fmtn("(alpha=%.2f, c=%.0e: %s) ", alpha, c, e.what());
      }
    }
  }
  return {"capacity_closed_form_vs_quadrature", evaluated == 20 && worst <= 1e-6,
          fmtn("%d/20 points evaluated, worst relative error %.3g ", evaluated, worst) + failures};
}

CheckResult check_capacity_fallback(std::uint64_t draws, std::uint64_t seed) {
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 100;
  for (double alpha : {1.0004, 2.0, 2.9995}) {
    const double beta = 1.0, rho0 = 1.0;
    const auto cs = analytic::ChannelStats::from_moments(alpha * beta, alpha * beta * beta);
    const auto guarded = analytic::ergodic_capacity_guarded(cs, rho0);
    Rng rng = make_substream(seed, stream++);
    std::gamma_distribution<double> amp(alpha, beta);
    MomentAccumulator acc;
    for (std::uint64_t i = 0; i < draws; ++i) {
      const double a = amp(rng);
      acc.add(std::log1p(rho0 * a * a) / std::numbers::ln2);
    }
    const double ci = kZ95 * acc.std_error_of_mean();
    const bool fell_back = guarded.method == analytic::CapacityMethod::quadrature;
    const bool agrees = std::abs(guarded.bits - acc.mean()) <= ci;
    ok = ok && fell_back && agrees;
    detail += fmtn("alpha=%.4f %s %.5f vs MC %.5f+-%.5f; ", alpha, fell_back ? "quadrature" : "closed-form",
                   guarded.bits, acc.mean(), ci);
  }
  return {"capacity_near_pole_fallback", ok, detail};
}

double threshold_for_coverage(const analytic::SystemParams& sp, double target) {
  const auto cs = analytic::channel_stats(sp);
  const double rho0 = sp.rho0();
  double lo = -200.0, hi = 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (analytic::coverage_probability(analytic::db_to_linear(mid), cs, rho0) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CheckResult check_coverage_anchor(const analytic::SystemParams& sp) {
  const auto s50 = with_elements(sp, 50);
  const auto s100 = with_elements(sp, 100);
  const double th = analytic::db_to_linear(10.0);
  const double p50 = analytic::coverage_probability(th, analytic::channel_stats(s50), s50.rho0());
  const double p100 = analytic::coverage_probability(th, analytic::channel_stats(s100), s100.rho0());
  const double gap = threshold_for_coverage(s100, 0.6) - threshold_for_coverage(s50, 0.6);
  const bool ok = std::abs(p50 - 0.6) <= 0.05 && std::abs(p100 - 0.9) <= 0.05 && std::abs(gap - 6.0) <= 1.0;
  return {"coverage_anchor_10db", ok,
          fmtn("P_c(L=50)=%.4f, P_c(L=100)=%.4f, gap at P_c=0.6: %.3f dB", p50, p100, gap)};
}

VisibleRisLaw check_visible_ris_simulation(const analytic::SystemParams& sp, std::uint64_t trials,
                                           std::uint64_t seed) {
  sim::McConfig mc;
  mc.num_trials = trials;
  mc.seed = seed;
  mc.visibility = geometry::Visibility::independent;
  sim::SimulationRequest req;
  req.keep_distances = true;
  const auto s = sim::simulate(sp, mc, req);
  const double mu = sp.deployment.mu_ris;

  auto ks_against = [&](const geometry::BlockageParams& b) {
    const double mass = 1.0 - geometry::void_probability(mu, b);
    return ks_statistic(s.w_g, [&](double w) { return geometry::cdf_nearest_visible_ris(w, mu, b) / mass; });
  };
  VisibleRisLaw out;
  const double ks = ks_against(sp.blockage());
  out.law = {"visible_ris_distance_ks", ks < 0.01, fmtn("KS=%.4f over %zu visible distances", ks, s.w_g.size())};

  const double pv = geometry::void_probability(mu, sp.blockage());
  const double freq = static_cast<double>(s.void_trials) / static_cast<double>(s.trials);
  const double sigma = std::sqrt(pv * (1.0 - pv) / static_cast<double>(s.trials));
  out.voids = {"void_frequency", std::abs(freq - pv) <= 3.0 * sigma,
               fmtn("frequency %.6f vs %.6f (%.2f sigma)", freq, pv, (freq - pv) / sigma)};

  auto mutated = sp.blockage();
  mutated.upsilon *= 2.0;
  const double ks_mut = ks_against(mutated);
  out.mutation = {"mutation_doubled_upsilon_detected", ks_mut >= 0.01,
                  fmtn("KS against the corrupted law %.4f", ks_mut)};
  return out;
}

ChannelAgreement check_channel_agreement(const analytic::SystemParams& sp, const std::vector<int>& ls,
                                         std::vector<int> moment_ls, std::uint64_t trials,
                                         std::uint64_t seed) {
  ChannelAgreement out;
  out.coverage = {"coverage_analytic_vs_mc", true, ""};
  out.moments = {"channel_moments_analytic_vs_mc", true, ""};
  const auto grid = fig2_thresholds();
  for (int l : ls) {
    const auto s = with_elements(sp, l);
    const auto cs = analytic::channel_stats(s);
    sim::McConfig mc;
    mc.num_trials = trials;
    mc.seed = seed;
    sim::SimulationRequest req;
    req.thresholds = grid;
    const auto sum = sim::simulate(s, mc, req);
    double worst = 0.0;
    for (const auto& c : sum.coverage) {
      worst = std::max(worst, std::abs(analytic::coverage_probability(c.rho_th, cs, s.rho0()) - c.p_cov));
    }
    out.coverage.passed = out.coverage.passed && worst <= 0.05;
    out.coverage.detail += fmtn("L=%d max gap %.4f; ", l, worst);
    if (std::find(moment_ls.begin(), moment_ls.end(), l) != moment_ls.end()) {
      const double zm = (sum.mean_A.value - cs.mean_A) / sum.mean_A.std_error;
      const double zv = (sum.var_A.value - cs.var_A) / sum.var_A.std_error;
      out.moments.passed = out.moments.passed && std::abs(zm) <= 4.0 && std::abs(zv) <= 4.0;
      out.moments.detail += fmtn("L=%d mean %.5g vs %.5g (z=%.2f), var %.5g vs %.5g (z=%.2f); ", l,
                                 sum.mean_A.value, cs.mean_A, zm, sum.var_A.value, cs.var_A, zv);
    }
  }
  return out;
}

CheckResult check_deployment_analytic(const analytic::SystemParams& sp, const std::vector<int>& ls) {
  bool ok = true;
  std::string detail;
  const double th = analytic::db_to_linear(10.0);
  for (int l : ls) {
    auto s = with_elements(sp, l);
    auto cov = [&](const analytic::SystemParams& x) {
      return analytic::coverage_probability(th, analytic::channel_stats(x), x.rho0());
    };
    std::vector<double> pm;
    for (double mu : default_mu_ris_grid()) {
      s.deployment.mu_ris = mu;
      pm.push_back(cov(s));
    }
    s.deployment.mu_ris = sp.deployment.mu_ris;
    bool nondecreasing = true;
    for (std::size_t i = 1; i < pm.size(); ++i) nondecreasing = nondecreasing && pm[i] >= pm[i - 1] - 1e-12;
    const bool saturated = pm.back() - pm[pm.size() - 2] < 0.01;

    std::vector<double> ph;
    const auto hg = default_h_ris_grid();
    for (double h : hg) {
      s.deployment.h_ris = h;
      ph.push_back(cov(s));
    }
    const auto k = static_cast<std::size_t>(std::max_element(ph.begin(), ph.end()) - ph.begin());
    bool unimodal = k > 0 && k + 1 < ph.size();
    for (std::size_t i = 1; i <= k && unimodal; ++i) unimodal = ph[i] > ph[i - 1];
    for (std::size_t i = k + 1; i < ph.size() && unimodal; ++i) unimodal = ph[i] <= ph[i - 1];
    const bool in_band = hg[k] >= 10.0 && hg[k] <= 100.0;
    ok = ok && nondecreasing && saturated && unimodal && in_band;
    detail += fmtn("L=%d mu: %.4f..%.4f nondecreasing %s, last step %.2g; h_ris argmax %.0f m (P_c %.4f), unimodal %s; ",
                   l, pm.front(), pm.back(), nondecreasing ? "yes" : "no", pm.back() - pm[pm.size() - 2],
                   hg[k], ph[k], unimodal ? "yes" : "no");
  }
  return {"deployment_shape_analytic", ok, detail};
}

CheckResult check_deployment_mc(const analytic::SystemParams& sp, const std::vector<int>& ls,
                                std::uint64_t trials, std::uint64_t seed) {
  bool ok = true;
  std::string detail;
  const std::vector<double> th{analytic::db_to_linear(10.0)};
  for (int l : ls) {
    auto s = with_elements(sp, l);
    std::vector<double> p;
    for (double mu : default_mu_ris_grid()) {
      s.deployment.mu_ris = mu;
      sim::McConfig mc;
      mc.num_trials = trials;
      mc.seed = seed;
      p.push_back(sim::estimate_coverage(s, mc, th).front().p_cov);
    }
    const double n = static_cast<double>(trials);
    auto noise = [&](double a, double b) {
      const double pbar = 0.5 * (a + b);
      return 3.0 * std::sqrt(2.0 * pbar * (1.0 - pbar) / n);
    };
    bool no_drop = true;
    for (std::size_t i = 1; i < p.size(); ++i) no_drop = no_drop && p[i] >= p[i - 1] - noise(p[i], p[i - 1]);
    const double last = p.back() - p[p.size() - 2];
    const bool flat = std::abs(last) <= std::max(noise(p.back(), p[p.size() - 2]), 0.01);
    ok = ok && no_drop && flat;
    detail += fmtn("L=%d %.4f..%.4f, no drop beyond noise %s, last step %.4f; ", l, p.front(), p.back(),
                   no_drop ? "yes" : "no", last);
  }
  return {"deployment_mu_ris_mc", ok, detail};
}

CheckResult check_visibility_modes(const analytic::SystemParams& sp, std::uint64_t trials,
                                   std::uint64_t seed) {
  sim::McConfig mc;
  mc.num_trials = trials;
  mc.seed = seed;
  sim::SimulationRequest req;
  req.keep_distances = true;
  req.thresholds = fig2_thresholds();
  mc.visibility = geometry::Visibility::independent;
  const auto a = sim::simulate(sp, mc, req);
  mc.visibility = geometry::Visibility::explicit_scene;
  const auto b = sim::simulate(sp, mc, req);
  const double ks = ks_two_sample(a.w_g, b.w_g);
  double gap = 0.0;
  for (std::size_t i = 0; i < a.coverage.size(); ++i) {
    gap = std::max(gap, std::abs(a.coverage[i].p_cov - b.coverage[i].p_cov));
  }
  return {"visibility_modes_agree", ks < 0.02 && gap < 0.02,
          fmtn("distance KS %.4f, max coverage gap %.4f, voids %llu vs %llu", ks, gap,
               static_cast<unsigned long long>(a.void_trials), static_cast<unsigned long long>(b.void_trials))};
}

bool same_summary(const sim::SimulationSummary& a, const sim::SimulationSummary& b) {
  auto eq = [](double x, double y) { return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y); };
  auto eq_est = [&](const sim::Estimate& x, const sim::Estimate& y) {
    return eq(x.value, y.value) && eq(x.ci_halfwidth, y.ci_halfwidth) && eq(x.std_error, y.std_error);
  };
  if (a.trials != b.trials || a.void_trials != b.void_trials || a.coverage.size() != b.coverage.size() ||
      a.capacity.size() != b.capacity.size() || a.w_g != b.w_g || a.w_hap != b.w_hap) {
    return false;
  }
  for (std::size_t i = 0; i < a.coverage.size(); ++i) {
    if (!eq(a.coverage[i].p_cov, b.coverage[i].p_cov) || !eq(a.coverage[i].ci_halfwidth, b.coverage[i].ci_halfwidth)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.capacity.size(); ++i) {
    if (!eq_est(a.capacity[i].bits, b.capacity[i].bits)) return false;
  }
  return eq_est(a.mean_A, b.mean_A) && eq_est(a.var_A, b.var_A) && eq_est(a.hap_ris_gain, b.hap_ris_gain);
}

CheckResult check_thread_determinism(const analytic::SystemParams& sp, std::uint64_t trials,
                                     std::uint64_t seed, unsigned threads) {
  sim::McConfig mc;
  mc.num_trials = trials;
  mc.seed = seed;
  sim::SimulationRequest req;
  req.thresholds = fig2_thresholds();
  req.capacity_rho0 = {sp.rho0(), 10.0 * sp.rho0()};
  req.keep_distances = true;
  mc.threads = 1;
  const auto a = sim::simulate(sp, mc, req);
  mc.threads = threads;
  const auto b = sim::simulate(sp, mc, req);
  const auto c = sim::simulate(sp, mc, req);
  const bool ok = same_summary(a, b) && same_summary(b, c);
  return {"thread_count_determinism", ok, fmtn("1 vs %u threads, %llu trials", threads,
                                               static_cast<unsigned long long>(trials))};
}

std::vector<CheckResult> run_suite(Level level, const analytic::SystemParams& sp, std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check_db_roundtrip());
  out.push_back(check_kappa_mu_normalization());
  out.push_back(check_kappa_mu_sampler(1000000, seed));
  out.push_back(check_hap_moment_oracle());
  out.push_back(check_visible_ris_mass(sp));
  out.push_back(check_snr_law_identities());
  out.push_back(check_capacity_closed_form());
  out.push_back(check_coverage_anchor(sp));
  out.push_back(check_deployment_analytic(sp, {50, 100}));
  const auto vis = check_visible_ris_simulation(with_elements(sp, 0), 100000, seed);
  out.push_back(vis.law);
  out.push_back(vis.voids);
  out.push_back(vis.mutation);
  out.push_back(check_thread_determinism(with_elements(sp, 50), 20000, seed, 4));
  if (level == Level::full) {
    out.push_back(check_capacity_fallback(1000000, seed));
    const auto agree = check_channel_agreement(sp, {0, 50, 100}, {50, 100}, 100000, seed);
    out.push_back(agree.coverage);
    out.push_back(agree.moments);
    out.push_back(check_deployment_mc(sp, {50, 100}, 20000, seed));
    out.push_back(check_visibility_modes(with_elements(sp, 50), 100000, seed));
  }
  return out;
}

}  // namespace hapris::validation
