#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hapris/quadrature.hpp"
#include "hapris/stats.hpp"

namespace hapris::geometry {

/// Boolean-model blockage constants: a link of horizontal length w is
/// line-of-sight with probability exp(-(upsilon w + p)).
struct BlockageParams {
  double lambda_b = 0.0;     ///< buildings per m^2
  double mean_length = 0.0;  ///< m
  double mean_width = 0.0;   ///< m
  double upsilon = 0.0;      ///< 1/m, 2 lambda_b (E[L] + E[W]) / pi
  double p = 0.0;            ///< lambda_b E[L] E[W]

  static BlockageParams from_buildings(double lambda_b, double mean_length, double mean_width);
  void validate() const;
};

/// Building footprint size law. Every law has the configured mean.
enum class SizeLaw { point, uniform, exponential };

struct SizeDistribution {
  SizeLaw law = SizeLaw::point;
  /// Uniform law only: support is mean * [1 - spread, 1 + spread], spread in [0, 1].
  double spread = 0.0;
};

/// Everything needed to sample explicit building scenes.
struct BuildingModel {
  BlockageParams blockage;
  SizeDistribution length_law;
  SizeDistribution width_law;

  /// Upper bound on half a footprint diagonal, used to pad sampling windows.
  /// Exponential laws use the 1 - 1e-9 quantile.
  double max_half_diagonal() const;
};

struct DeploymentParams {
  double lambda_hap = 0.0;  ///< HAPs per m^2
  double mu_ris = 0.0;      ///< RISs per m^2
  double h_hap = 0.0;       ///< m
  double h_ris = 0.0;       ///< m
  /// Minimum HAP-visibility height. Carried in configurations only; no
  /// computation reads it.
  std::optional<double> h_min;

  void validate() const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Segment2 {
  Point2 from;
  Point2 to;
};

struct Building {
  Point2 center;
  double length = 0.0;
  double width = 0.0;
  double orientation = 0.0;  ///< rad in (0, 2 pi], direction of the length side
};

// ---- analytic distance laws -------------------------------------------------

/// Line-of-sight probability for a link of horizontal length w.
double los_probability(double w, const BlockageParams& b);

/// PDF of the horizontal distance to the nearest visible RIS,
///   2 pi mu w exp(-(upsilon w + p + 2 pi mu U(w))).
/// Improper: integrates to 1 - void_probability().
double pdf_nearest_visible_ris(double w, double mu_ris, const BlockageParams& b);

/// Closed-form integral of pdf_nearest_visible_ris over [0, w].
double cdf_nearest_visible_ris(double w, double mu_ris, const BlockageParams& b);

/// Probability that no RIS is visible, exp(-2 pi mu e^{-p} / upsilon^2).
double void_probability(double mu_ris, const BlockageParams& b);

/// E[(w^2 + h_ris^2)^{-t eps / 4}] against the improper nearest-visible-RIS
/// density (so t = 0 returns the visible mass, not 1).
double moment_rg(double t, double eps_ru, double h_ris, double mu_ris, const BlockageParams& b,
                 const quad::QuadControl& ctl = {1e-10, 0.0, 4000});

/// Nearest-HAP horizontal distance PDF 2 lambda pi w exp(-lambda pi w^2).
double pdf_nearest_hap(double w, double lambda_hap);
double cdf_nearest_hap(double w, double lambda_hap);

/// Closed form E[R^{-t eta / 2}] = (pi lambda)^{eta t/4} e^{pi h^2 lambda}
/// Gamma(1 - eta t / 4, h^2 lambda pi) with R = sqrt(w^2 + h^2).
double moment_r(double t, double eta, double h, double lambda_hap);

/// The same moment by quadrature of its defining integral.
double moment_r_quadrature(double t, double eta, double h, double lambda_hap,
                           const quad::QuadControl& ctl = {1e-12, 0.0, 4000});

// ---- sampling ----------------------------------------------------------------

/// Homogeneous PPP restricted to the disk of `radius` about the origin.
std::vector<Point2> sample_ppp_disk(double density, double radius, Rng& rng);

/// Points of a homogeneous PPP on the plane in order of increasing distance
/// from the origin (squared radii have exponential increments).
class RadialPpp {
 public:
  explicit RadialPpp(double density);

  /// Next point; infinitely far when the density is zero.
  Point2 next(Rng& rng);
  double last_radius() const { return std::sqrt(r2_); }

 private:
  double density_;
  double r2_ = 0.0;
};

/// One building centred at `center` with size and orientation drawn from the model.
Building draw_building(const BuildingModel& model, Point2 center, Rng& rng);

/// Boolean-model scene: PPP centres, sizes from the model's laws,
/// orientation uniform on (0, 2 pi].
std::vector<Building> sample_buildings(const BuildingModel& model, double radius, Rng& rng);

/// True iff the point lies inside (or on) the building footprint.
bool contains(const Building& b, Point2 pt);

/// True iff the segment intersects the rectangle (separating-axis test).
bool intersects(const Segment2& s, const Building& b);

/// True iff the segment intersects any building.
bool is_blocked(const Segment2& s, std::span<const Building> buildings);

enum class Visibility {
  independent,  ///< each RIS visible with probability los_probability(w)
  explicit_scene  ///< segment test against a sampled building scene
};

struct RisHit {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Nearest RIS that passes an independent line-of-sight draw.
std::optional<RisHit> nearest_visible_ris(Point2 user, std::span<const Point2> ris,
                                          const BlockageParams& b, Rng& rng);

/// Nearest RIS whose segment to the user clears every building.
std::optional<RisHit> nearest_visible_ris(Point2 user, std::span<const Point2> ris,
                                          std::span<const Building> buildings);

/// Radius beyond which a nearest HAP lies with probability < tail.
double hap_window_radius(double lambda_hap, double tail = 1e-6);

/// Radius beyond which the expected number of visible RISs is < tail.
double ris_window_radius(double mu_ris, const BlockageParams& b, double tail = 1e-6);

}  // namespace hapris::geometry
