#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hapris/analytic.hpp"
#include "hapris/geometry.hpp"
#include "hapris/stats.hpp"

namespace hapris::sim {

/// Pins parts of the geometry, for checks against known single-link laws.
struct GeometryOverride {
  /// Horizontal distance of the serving HAP, placed at (w_hap, 0).
  std::optional<double> w_hap;
  /// Horizontal distance of the serving RIS, placed at (0, w_g) and always visible.
  std::optional<double> w_g;
};

struct McConfig {
  std::uint64_t num_trials = 100000;
  std::uint64_t seed = 1;
  geometry::Visibility visibility = geometry::Visibility::independent;
  /// RIS search radius; nullopt sizes it from the visibility tail.
  std::optional<double> window_radius;
  /// Worker threads; 0 picks the hardware concurrency. Never changes results.
  unsigned threads = 0;
  std::optional<GeometryOverride> geometry_override;

  void validate() const;
};

struct TrialResult {
  double snr = 0.0;
  /// |A|, the combined channel amplitude.
  double amplitude = 0.0;
  std::optional<double> w_g;
  double w_hap = 0.0;
  bool had_visible_ris = false;
  /// R_q^{-eps/2} from the true HAP-to-RIS geometry, when a RIS serves.
  std::optional<double> hap_ris_gain;
};

/// Per-run sampling state that does not change between trials.
class TrialKernel {
 public:
  TrialKernel(const analytic::SystemParams& sp, const McConfig& mc);

  TrialResult operator()(Rng& rng) const;

  /// Search radius for the serving RIS; beyond it the trial is a void.
  double ris_window() const { return ris_window_; }

 private:
  std::optional<geometry::Point2> serving_ris(Rng& rng) const;

  analytic::SystemParams sp_;
  McConfig mc_;
  double ris_window_ = 0.0;
  double reach_ = 0.0;
};

/// One independent scene redraw: HAPs, RISs, buildings and fading.
TrialResult run_trial(const analytic::SystemParams& sp, const McConfig& mc, Rng& substream);

/// Statistic with its 95% confidence half-width.
struct Estimate {
  double value = 0.0;
  double ci_halfwidth = 0.0;
  double std_error = 0.0;
};

struct CoveragePoint {
  double rho_th = 0.0;
  double p_cov = 0.0;
  double ci_halfwidth = 0.0;
};

struct CapacityPoint {
  double rho0 = 0.0;
  Estimate bits;
};

/// What a single pass over the trials should accumulate.
struct SimulationRequest {
  /// Linear SNR thresholds for coverage.
  std::vector<double> thresholds;
  /// Linear transmit SNRs for capacity. SNR = rho0 |A|^2, so one pass serves
  /// every rho0; empty means the scenario's own rho0.
  std::vector<double> capacity_rho0;
  /// Keep per-trial distances for distribution diagnostics.
  bool keep_distances = false;
};

struct SimulationSummary {
  std::uint64_t trials = 0;
  std::vector<CoveragePoint> coverage;
  std::vector<CapacityPoint> capacity;
  Estimate mean_A;
  Estimate var_A;
  std::uint64_t void_trials = 0;
  /// Mean R_q^{-eps/2} over trials with a serving RIS.
  Estimate hap_ris_gain;
  /// Ascending; filled only when keep_distances is set.
  std::vector<double> w_g;
  std::vector<double> w_hap;
};

/// Runs mc.num_trials trials in fixed blocks of substreams and reduces the
/// blocks in index order, so the summary is bit-identical for a given seed
/// whatever the thread count.
SimulationSummary simulate(const analytic::SystemParams& sp, const McConfig& mc,
                           const SimulationRequest& request);

std::vector<CoveragePoint> estimate_coverage(const analytic::SystemParams& sp, const McConfig& mc,
                                             std::span<const double> rho_th_grid);

/// Mean of log2(1 + SNR) at the scenario's rho0.
Estimate estimate_capacity(const analytic::SystemParams& sp, const McConfig& mc);

struct DistanceDiagnostics {
  Histogram w_g;
  Histogram w_hap;
  /// KS distance of visible-RIS distances against the existence-conditioned law.
  double ks_w_g = 0.0;
  double ks_w_hap = 0.0;
  double void_frequency = 0.0;
  double void_probability = 0.0;
  std::uint64_t trials = 0;
};

DistanceDiagnostics empirical_distance_diagnostics(const analytic::SystemParams& sp,
                                                   const McConfig& mc, int bins = 50);

}  // namespace hapris::sim
