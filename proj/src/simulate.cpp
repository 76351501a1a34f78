#include "hapris/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "hapris/errors.hpp"
#include "hapris/fading.hpp"

namespace hapris::sim {

namespace {

// Trials per reduction block. Fixed, so block boundaries (and therefore the
// floating-point reduction order) never depend on the thread count.
constexpr std::uint64_t kBlockTrials = 2048;

struct BlockStats {
  std::vector<std::uint64_t> covered;
  std::vector<MomentAccumulator> capacity;
  MomentAccumulator amplitude;
  MomentAccumulator hap_ris_gain;
  std::uint64_t voids = 0;
  std::vector<double> w_g;
  std::vector<double> w_hap;
};

Estimate make_estimate(double value, double std_error) {
  return {value, kZ95 * std_error, std_error};
}

}  // namespace

void McConfig::validate() const {
  if (num_trials < 1) throw DomainError("num_trials must be >= 1");
  if (window_radius && !(*window_radius > 0.0)) throw DomainError("window radius must be > 0");
  if (geometry_override) {
    if (geometry_override->w_hap && !(*geometry_override->w_hap >= 0.0)) {
      throw DomainError("override w_hap must be >= 0");
    }
    if (geometry_override->w_g && !(*geometry_override->w_g >= 0.0)) {
      throw DomainError("override w_g must be >= 0");
    }
  }
}

TrialKernel::TrialKernel(const analytic::SystemParams& sp, const McConfig& mc) : sp_(sp), mc_(mc) {
  sp_.validate();
  mc_.validate();
  if (mc_.window_radius) {
    ris_window_ = *mc_.window_radius;
  } else {
    geometry::BlockageParams b = sp_.blockage();
    // With the user outdoors a link of length w clears the scene with
    // probability exp(-upsilon w), so explicit scenes size the window with p = 0.
    if (mc_.visibility == geometry::Visibility::explicit_scene) b.p = 0.0;
    ris_window_ = geometry::ris_window_radius(sp_.deployment.mu_ris, b);
  }
  reach_ = sp_.buildings.max_half_diagonal();
}

std::optional<geometry::Point2> TrialKernel::serving_ris(Rng& rng) const {
  const geometry::Point2 user{0.0, 0.0};
  geometry::RadialPpp ris(sp_.deployment.mu_ris);
  if (mc_.visibility == geometry::Visibility::independent) {
    for (;;) {
      const geometry::Point2 pt = ris.next(rng);
      const double w = ris.last_radius();
      if (w > ris_window_) return std::nullopt;
      if (uniform01(rng) < geometry::los_probability(w, sp_.blockage())) return pt;
    }
  }
  // Buildings are generated outward on demand: a segment of length w from
  // the user only meets buildings centred within w + reach.
  geometry::RadialPpp centres(sp_.blockage().lambda_b);
  std::vector<geometry::Building> scene;
  geometry::Point2 pending = centres.next(rng);
  for (;;) {
    const geometry::Point2 pt = ris.next(rng);
    const double w = ris.last_radius();
    if (w > ris_window_) return std::nullopt;
    while (centres.last_radius() <= w + reach_) {
      const geometry::Building b = geometry::draw_building(sp_.buildings, pending, rng);
      // The typical user stands outdoors.
      if (!geometry::contains(b, user)) scene.push_back(b);
      pending = centres.next(rng);
    }
    if (!geometry::is_blocked({user, pt}, scene)) return pt;
  }
}

TrialResult TrialKernel::operator()(Rng& rng) const {
  const auto& dep = sp_.deployment;
  const auto& pl = sp_.pathloss;
  const auto* pin = mc_.geometry_override ? &*mc_.geometry_override : nullptr;
  TrialResult out;

  geometry::Point2 hap;
  if (pin && pin->w_hap) {
    hap = {*pin->w_hap, 0.0};
  } else {
    hap = geometry::RadialPpp(dep.lambda_hap).next(rng);
  }
  out.w_hap = std::hypot(hap.x, hap.y);

  std::optional<geometry::Point2> ris;
  if (pin && pin->w_g) {
    ris = geometry::Point2{0.0, *pin->w_g};
  } else {
    ris = serving_ris(rng);
  }

  double amplitude = 0.0;
  if (ris) {
    out.had_visible_ris = true;
    out.w_g = std::hypot(ris->x, ris->y);
    const double dh = dep.h_hap - dep.h_ris;
    const double r_q = std::sqrt(std::pow(hap.x - ris->x, 2) + std::pow(hap.y - ris->y, 2) + dh * dh);
    out.hap_ris_gain = std::pow(r_q, -0.5 * pl.hap_ris);
    if (sp_.cascade.num_elements > 0) {
      const double nu = fading::sample_nu(sp_.cascade, rng);
      const double r_g = std::hypot(*out.w_g, dep.h_ris);
      amplitude += nu * *out.hap_ris_gain * std::pow(r_g, -0.5 * pl.ris_user);
    }
  }
  if (sp_.direct_link) {
    const double u = fading::sample_kappa_mu(sp_.direct, rng);
    const double r_u = std::hypot(out.w_hap, dep.h_hap);
    amplitude += u * std::pow(r_u, -0.5 * pl.hap_user);
  }
  out.amplitude = amplitude;
  out.snr = sp_.rho0() * amplitude * amplitude;
  return out;
}

TrialResult run_trial(const analytic::SystemParams& sp, const McConfig& mc, Rng& substream) {
  return TrialKernel(sp, mc)(substream);
}

SimulationSummary simulate(const analytic::SystemParams& sp, const McConfig& mc,
                           const SimulationRequest& request) {
  const TrialKernel kernel(sp, mc);
  const double rho0 = sp.rho0();
  std::vector<double> cap_rho0 = request.capacity_rho0;
  if (cap_rho0.empty()) cap_rho0.push_back(rho0);

  const std::uint64_t n = mc.num_trials;
  const std::uint64_t num_blocks = (n + kBlockTrials - 1) / kBlockTrials;
  std::vector<BlockStats> blocks(num_blocks);

  auto run_block = [&](std::uint64_t b) {
    BlockStats& st = blocks[b];
    st.covered.assign(request.thresholds.size(), 0);
    st.capacity.assign(cap_rho0.size(), {});
    const std::uint64_t begin = b * kBlockTrials;
    const std::uint64_t end = std::min(n, begin + kBlockTrials);
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng = make_substream(mc.seed, i);
      const TrialResult r = kernel(rng);
      for (std::size_t k = 0; k < request.thresholds.size(); ++k) {
        if (r.snr >= request.thresholds[k]) ++st.covered[k];
      }
      const double a2 = r.amplitude * r.amplitude;
      for (std::size_t k = 0; k < cap_rho0.size(); ++k) {
        st.capacity[k].add(std::log1p(cap_rho0[k] * a2) / std::numbers::ln2);
      }
      st.amplitude.add(r.amplitude);
      if (!r.had_visible_ris) ++st.voids;
      if (r.hap_ris_gain) st.hap_ris_gain.add(*r.hap_ris_gain);
      if (request.keep_distances) {
        if (r.w_g) st.w_g.push_back(*r.w_g);
        st.w_hap.push_back(r.w_hap);
      }
    }
  };

  unsigned threads = mc.threads != 0 ? mc.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, num_blocks));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < num_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          for (std::uint64_t b = next++; b < num_blocks; b = next++) {
            try {
              run_block(b);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
              next = num_blocks;
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  // Fixed-order reduction.
  std::vector<std::uint64_t> covered(request.thresholds.size(), 0);
  std::vector<MomentAccumulator> capacity(cap_rho0.size());
  MomentAccumulator amplitude;
  MomentAccumulator hap_ris_gain;
  SimulationSummary out;
  for (const BlockStats& st : blocks) {
    for (std::size_t k = 0; k < covered.size(); ++k) covered[k] += st.covered[k];
    for (std::size_t k = 0; k < capacity.size(); ++k) capacity[k].merge(st.capacity[k]);
    amplitude.merge(st.amplitude);
    hap_ris_gain.merge(st.hap_ris_gain);
    out.void_trials += st.voids;
    out.w_g.insert(out.w_g.end(), st.w_g.begin(), st.w_g.end());
    out.w_hap.insert(out.w_hap.end(), st.w_hap.begin(), st.w_hap.end());
  }
  std::sort(out.w_g.begin(), out.w_g.end());
  std::sort(out.w_hap.begin(), out.w_hap.end());

  out.trials = n;
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < covered.size(); ++k) {
    const double p = static_cast<double>(covered[k]) / nd;
    out.coverage.push_back({request.thresholds[k], p, kZ95 * std::sqrt(p * (1.0 - p) / nd)});
  }
  for (std::size_t k = 0; k < capacity.size(); ++k) {
    out.capacity.push_back(
        {cap_rho0[k], make_estimate(capacity[k].mean(), capacity[k].std_error_of_mean())});
  }
  out.mean_A = make_estimate(amplitude.mean(), amplitude.std_error_of_mean());
  out.var_A = make_estimate(amplitude.variance(), amplitude.std_error_of_variance());
  if (hap_ris_gain.count() > 0) {
    out.hap_ris_gain = make_estimate(hap_ris_gain.mean(), hap_ris_gain.std_error_of_mean());
  }
  return out;
}

std::vector<CoveragePoint> estimate_coverage(const analytic::SystemParams& sp, const McConfig& mc,
                                             std::span<const double> rho_th_grid) {
  SimulationRequest req;
  req.thresholds.assign(rho_th_grid.begin(), rho_th_grid.end());
  return simulate(sp, mc, req).coverage;
}

Estimate estimate_capacity(const analytic::SystemParams& sp, const McConfig& mc) {
  return simulate(sp, mc, {}).capacity.front().bits;
}

DistanceDiagnostics empirical_distance_diagnostics(const analytic::SystemParams& sp,
                                                   const McConfig& mc, int bins) {
  SimulationRequest req;
  req.keep_distances = true;
  const SimulationSummary s = simulate(sp, mc, req);
  const auto& dep = sp.deployment;
  const auto& b = sp.blockage();

  DistanceDiagnostics d;
  d.trials = s.trials;
  d.void_frequency = static_cast<double>(s.void_trials) / static_cast<double>(s.trials);
  d.void_probability = geometry::void_probability(dep.mu_ris, b);
  const double visible_mass = 1.0 - d.void_probability;
  d.ks_w_g = ks_statistic(s.w_g, [&](double w) {
    return geometry::cdf_nearest_visible_ris(w, dep.mu_ris, b) / visible_mass;
  });
  d.ks_w_hap = ks_statistic(s.w_hap, [&](double w) { return geometry::cdf_nearest_hap(w, dep.lambda_hap); });
  const double g_hi = s.w_g.empty() ? 1.0 : s.w_g[s.w_g.size() * 999 / 1000];
  const double h_hi = s.w_hap.empty() ? 1.0 : s.w_hap[s.w_hap.size() * 999 / 1000];
  d.w_g = make_histogram(s.w_g, 0.0, g_hi, bins, s.trials);
  d.w_hap = make_histogram(s.w_hap, 0.0, h_hi, bins, s.trials);
  return d;
}

}  // namespace hapris::sim
