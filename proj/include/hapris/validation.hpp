#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hapris/analytic.hpp"
#include "hapris/simulate.hpp"

namespace hapris::validation {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// dB/linear conversions round-trip to 1e-12.
CheckResult check_db_roundtrip();

/// E[X^2] = 1 to 1e-10 on a (kappa, mu) grid.
CheckResult check_kappa_mu_normalization();

/// Envelope sampler against the Rayleigh and Rician CDFs: KS < 0.003.
CheckResult check_kappa_mu_sampler(std::uint64_t draws, std::uint64_t seed);

/// Closed-form HAP distance moments against quadrature of their integrals,
/// t in {1, 2}, eta in {2, 3}, H in {20, 50} km, lambda in {1e-6, 5e-6}.
CheckResult check_hap_moment_oracle();

/// Visible-RIS density: nonnegative, total mass = 1 - void probability to 1e-9.
CheckResult check_visible_ris_mass(const analytic::SystemParams& sp);

/// Gamma SNR density normalizes to 1 and coverage matches its definition.
CheckResult check_snr_law_identities();

/// Closed-form capacity against quadrature to 1e-6 on 20 pole-free points.
CheckResult check_capacity_closed_form();

/// Near-pole shapes fall back to quadrature, which agrees with a Gamma-amplitude
/// simulation within its 95% confidence interval.
CheckResult check_capacity_fallback(std::uint64_t draws, std::uint64_t seed);

/// Coverage at 10 dB: L=50 about 0.6, L=100 about 0.9 (+-0.05), and the
/// horizontal gap between the two curves at P_c = 0.6 is 6 +- 1 dB.
CheckResult check_coverage_anchor(const analytic::SystemParams& sp);

/// Threshold (dB) at which analytic coverage equals `target`.
double threshold_for_coverage(const analytic::SystemParams& sp, double target);

struct VisibleRisLaw {
  CheckResult law;       ///< KS against the existence-conditioned law < 0.01
  CheckResult voids;     ///< void frequency within 3 binomial sigma
  CheckResult mutation;  ///< doubled upsilon in the reference law is detected
};

VisibleRisLaw check_visible_ris_simulation(const analytic::SystemParams& sp, std::uint64_t trials,
                                           std::uint64_t seed);

/// Analytic coverage within 0.05 of simulation over -10..30 dB, per L.
/// Also checks mean and variance of |A| within 4 standard errors.
struct ChannelAgreement {
  CheckResult coverage;
  CheckResult moments;
};

ChannelAgreement check_channel_agreement(const analytic::SystemParams& sp, const std::vector<int>& ls,
                                         std::vector<int> moment_ls, std::uint64_t trials,
                                         std::uint64_t seed);

/// Analytic coverage nondecreasing and saturating in mu_ris; unimodal in
/// h_ris with the maximizer in [10, 100] m.
CheckResult check_deployment_analytic(const analytic::SystemParams& sp, const std::vector<int>& ls);

/// Simulated coverage against mu_ris: no drop beyond noise, flat at the top.
CheckResult check_deployment_mc(const analytic::SystemParams& sp, const std::vector<int>& ls,
                                std::uint64_t trials, std::uint64_t seed);

/// Visible-RIS distances and coverage from explicit scenes against the
/// independent-thinning model (KS and coverage gap < 0.02).
CheckResult check_visibility_modes(const analytic::SystemParams& sp, std::uint64_t trials,
                                   std::uint64_t seed);

/// Bit-identical summaries for the same seed at 1 and `threads` workers.
CheckResult check_thread_determinism(const analytic::SystemParams& sp, std::uint64_t trials,
                                     std::uint64_t seed, unsigned threads);

bool same_summary(const sim::SimulationSummary& a, const sim::SimulationSummary& b);

/// Deployment sweep grids.
std::vector<double> default_mu_ris_grid();
std::vector<double> default_h_ris_grid();

enum class Level { quick, full };

std::vector<CheckResult> run_suite(Level level, const analytic::SystemParams& sp, std::uint64_t seed);

}  // namespace hapris::validation
