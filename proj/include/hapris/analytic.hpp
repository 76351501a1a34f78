#pragma once

#include <functional>

#include "hapris/fading.hpp"
#include "hapris/geometry.hpp"
#include "hapris/quadrature.hpp"

namespace hapris::analytic {

struct PathLossExponents {
  double hap_ris = 2.0;   ///< HAP-RIS link
  double ris_user = 3.0;  ///< RIS-user link
  double hap_user = 3.0;  ///< direct HAP-user link
};

/// Complete scenario for the analysis and the simulator.
struct SystemParams {
  geometry::DeploymentParams deployment;
  geometry::BuildingModel buildings;
  fading::CascadeParams cascade;
  fading::KappaMuParams direct = fading::KappaMuParams::rayleigh();
  /// false suppresses the direct HAP-user path (u = 0).
  bool direct_link = true;
  PathLossExponents pathloss;
  double tx_power_w = 10.0;
  double noise_power_w = 1.0;

  const geometry::BlockageParams& blockage() const { return buildings.blockage; }
  /// Transmit SNR E_s / N_0, linear.
  double rho0() const { return tx_power_w / noise_power_w; }
  void validate() const;
};

/// Dense-urban reference scenario: 5e-6 HAPs/m^2 at 50 km, 50e-6 RISs/m^2 at
/// 50 m, 200e-6 buildings/m^2 of 25 m x 25 m, exponents (2, 3, 3), Rician
/// K = 2 / K = 3 cascade links, Rayleigh direct link, 10 W over -92 dBm.
SystemParams urban_defaults(int num_elements = 100);

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);

/// Mean of the combined channel amplitude and its two additive parts:
/// p1 from the RIS cascade, p2 from the direct path.
struct MeanParts {
  double mean_A = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

/// Moment-matched Gamma(alpha, beta) description of |A|.
struct ChannelStats {
  double mean_A = 0.0;
  double var_A = 0.0;
  double alpha = 0.0;  ///< mean^2 / var
  double beta = 0.0;   ///< var / mean
  double p1 = 0.0;
  double p2 = 0.0;

  /// Throws NumericalError unless mean > 0 and var > 0.
  static ChannelStats from_moments(double mean_A, double var_A, double p1 = 0.0, double p2 = 0.0);
};

MeanParts mean_abs_A(const SystemParams& sp);

/// Throws NumericalError if the assembled variance is not positive.
double var_abs_A(const SystemParams& sp);

ChannelStats channel_stats(const SystemParams& sp);

/// Gamma density of |A|.
double amplitude_pdf(double a, const ChannelStats& cs);

/// Approximate end-to-end SNR density,
/// x^{(alpha-2)/2} exp(-sqrt(x / (beta^2 rho0))) / (2 beta^alpha Gamma(alpha) rho0^{alpha/2}).
double snr_pdf(double x, const ChannelStats& cs, double rho0);

/// P(SNR >= rho_th) = 1 - P(alpha, sqrt(rho_th / (rho0 beta^2))).
double coverage_probability(double rho_th, const ChannelStats& cs, double rho0);

/// Closed-form ergodic capacity in bits/s/Hz. Throws NearPoleError when
/// alpha is within 1e-3 of an integer (every integer is a pole of some
/// term) and NumericalError when cancellation makes the sum unreliable.
double ergodic_capacity(const ChannelStats& cs, double rho0);

/// E[g(SNR)] under the Gamma-approximated SNR law.
double expect_over_snr(const std::function<double(double)>& g, const ChannelStats& cs,
                       double rho0, const quad::QuadControl& ctl = {1e-11, 0.0, 4000});

/// Ergodic capacity by quadrature of log2(1 + x) against snr_pdf.
double capacity_by_quadrature(const ChannelStats& cs, double rho0);

enum class CapacityMethod { closed_form, quadrature };

struct CapacityValue {
  double bits = 0.0;
  CapacityMethod method = CapacityMethod::closed_form;
};

/// Closed form where it is well conditioned, quadrature otherwise.
CapacityValue ergodic_capacity_guarded(const ChannelStats& cs, double rho0);

}  // namespace hapris::analytic
