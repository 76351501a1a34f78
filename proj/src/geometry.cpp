#include "hapris/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "hapris/errors.hpp"
#include "hapris/specfun.hpp"

namespace hapris::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// (1 - (1 + y) e^{-y}) / y^2, stable as y -> 0.
double shadow_kernel(double y) {
  if (y < 0.1) {
    // sum_{k>=2} (-1)^k (k - 1) y^{k-2} / k!
    double sum = 0.0;
    double fact = 2.0;
    double power = 1.0;
    for (int k = 2; k < 16; ++k) {
      if (k > 2) {
        fact *= k;
        power *= -y;
      }
      sum += (k - 1) * power / fact;
    }
    return sum;
  }
  return (-std::expm1(-y) - y * std::exp(-y)) / (y * y);
}

// U(w) = e^{-p} int_0^w x e^{-upsilon x} dx.
double shadow_integral(double w, const BlockageParams& b) {
  return std::exp(-b.p) * w * w * shadow_kernel(b.upsilon * w);
}

// Visible-RIS mass beyond w: exp(-2 pi mu U(w)) - exp(-2 pi mu U(inf)).
double visible_survival(double w, double mu, const BlockageParams& b) {
  const double near = std::exp(-2.0 * kPi * mu * shadow_integral(w, b));
  if (b.upsilon == 0.0) return near;
  const double remaining =
      std::exp(-b.p) * (b.upsilon * w + 1.0) * std::exp(-b.upsilon * w) / (b.upsilon * b.upsilon);
  return near * -std::expm1(-2.0 * kPi * mu * remaining);
}

// Smallest r in [0, inf) with pred(r) true, for pred monotone false->true.
template <class Pred>
double solve_radius(Pred pred, double scale) {
  double hi = scale;
  for (int i = 0; i < 200 && !pred(hi); ++i) hi *= 2.0;
  if (!pred(hi)) return kInf;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

double draw_size(const SizeDistribution& d, double mean, Rng& rng) {
  switch (d.law) {
    case SizeLaw::point:
      return mean;
    case SizeLaw::uniform:
      return mean * (1.0 + d.spread * (2.0 * uniform01(rng) - 1.0));
    case SizeLaw::exponential:
      return -mean * std::log1p(-uniform01(rng));
  }
  return mean;
}

double max_size(const SizeDistribution& d, double mean) {
  switch (d.law) {
    case SizeLaw::point:
      return mean;
    case SizeLaw::uniform:
      return mean * (1.0 + d.spread);
    case SizeLaw::exponential:
      return mean * std::log(1e9);
  }
  return mean;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be > 0, got " + std::to_string(v));
  }
}

}  // namespace

BlockageParams BlockageParams::from_buildings(double lambda_b, double mean_length,
                                              double mean_width) {
  BlockageParams b;
  b.lambda_b = lambda_b;
  b.mean_length = mean_length;
  b.mean_width = mean_width;
  b.upsilon = 2.0 * lambda_b * (mean_length + mean_width) / kPi;
  b.p = lambda_b * mean_length * mean_width;
  b.validate();
  return b;
}

void BlockageParams::validate() const {
  for (double v : {lambda_b, mean_length, mean_width, upsilon, p}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("blockage parameters must be finite and >= 0");
    }
  }
}

double BuildingModel::max_half_diagonal() const {
  return 0.5 * std::hypot(max_size(length_law, blockage.mean_length),
                          max_size(width_law, blockage.mean_width));
}

void DeploymentParams::validate() const {
  require_positive(lambda_hap, "lambda_hap");
  require_positive(mu_ris, "mu_ris");
  require_positive(h_hap, "h_hap");
  require_positive(h_ris, "h_ris");
  if (!(h_hap > h_ris)) throw DomainError("h_hap must exceed h_ris");
}

double los_probability(double w, const BlockageParams& b) {
  return std::exp(-(b.upsilon * w + b.p));
}

double pdf_nearest_visible_ris(double w, double mu_ris, const BlockageParams& b) {
  if (!(w >= 0.0)) throw DomainError("distance must be >= 0");
  return 2.0 * kPi * mu_ris * w *
         std::exp(-(b.upsilon * w + b.p + 2.0 * kPi * mu_ris * shadow_integral(w, b)));
}

double cdf_nearest_visible_ris(double w, double mu_ris, const BlockageParams& b) {
  if (!(w >= 0.0)) throw DomainError("distance must be >= 0");
  if (std::isinf(w)) return 1.0 - void_probability(mu_ris, b);
  return -std::expm1(-2.0 * kPi * mu_ris * shadow_integral(w, b));
}

double void_probability(double mu_ris, const BlockageParams& b) {
  if (b.upsilon == 0.0) return 0.0;
  return std::exp(-2.0 * kPi * mu_ris * std::exp(-b.p) / (b.upsilon * b.upsilon));
}

double moment_rg(double t, double eps_ru, double h_ris, double mu_ris, const BlockageParams& b,
                 const quad::QuadControl& ctl) {
  if (!(t >= 0.0)) throw DomainError("moment order t must be >= 0");
  require_positive(h_ris, "h_ris");
  require_positive(mu_ris, "mu_ris");
  const double mass = 1.0 - void_probability(mu_ris, b);
  const double scale = std::max(1.0 / std::sqrt(mu_ris), b.upsilon > 0.0 ? 1.0 / b.upsilon : 0.0);
  const double w_max =
      solve_radius([&](double w) { return visible_survival(w, mu_ris, b) < 1e-13 * mass; }, scale);
  if (!std::isfinite(w_max)) throw NumericalError("moment_rg: could not bound the integration range");

  const double exponent = -0.25 * t * eps_ru;
  const double h2 = h_ris * h_ris;
  auto integrand = [&](double w) {
    return std::pow(w * w + h2, exponent) * pdf_nearest_visible_ris(w, mu_ris, b);
  };
  std::vector<double> cuts{0.0, w_max / 256, w_max / 64, w_max / 16, w_max / 4, w_max};
  if (h_ris < w_max) cuts.push_back(h_ris);
  std::sort(cuts.begin(), cuts.end());
  return quad::integrate(integrand, cuts, ctl).value;
}

double pdf_nearest_hap(double w, double lambda_hap) {
  if (!(w >= 0.0)) throw DomainError("distance must be >= 0");
  return 2.0 * lambda_hap * kPi * w * std::exp(-lambda_hap * kPi * w * w);
}

double cdf_nearest_hap(double w, double lambda_hap) {
  if (!(w >= 0.0)) throw DomainError("distance must be >= 0");
  return -std::expm1(-lambda_hap * kPi * w * w);
}

double moment_r(double t, double eta, double h, double lambda_hap) {
  if (!(t >= 0.0)) throw DomainError("moment order t must be >= 0");
  require_positive(h, "vertical distance");
  require_positive(lambda_hap, "lambda_hap");
  const double s = 0.25 * eta * t;
  const double x = h * h * lambda_hap * kPi;
  return std::exp(s * std::log(kPi * lambda_hap)) * specfun::upper_inc_gamma_scaled(1.0 - s, x);
}

double moment_r_quadrature(double t, double eta, double h, double lambda_hap,
                           const quad::QuadControl& ctl) {
  if (!(t >= 0.0)) throw DomainError("moment order t must be >= 0");
  require_positive(h, "vertical distance");
  require_positive(lambda_hap, "lambda_hap");
  // u = lambda pi w^2 maps the nearest-HAP law onto Exp(1).
  const double exponent = -0.25 * t * eta;
  const double inv = 1.0 / (lambda_hap * kPi);
  const double h2 = h * h;
  auto integrand = [&](double u) { return std::pow(u * inv + h2, exponent) * std::exp(-u); };
  const std::array<double, 6> cuts{0.0, 0.5, 2.0, 8.0, 20.0, 50.0};
  return quad::integrate(integrand, cuts, ctl).value;
}

std::vector<Point2> sample_ppp_disk(double density, double radius, Rng& rng) {
  if (!(density >= 0.0) || !(radius > 0.0)) {
    throw DomainError("sample_ppp_disk needs density >= 0 and radius > 0");
  }
  std::vector<Point2> pts;
  const double mean = density * kPi * radius * radius;
  if (mean <= 0.0) return pts;
  std::poisson_distribution<long> count(mean);
  const long n = count(rng);
  pts.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(uniform01(rng));
    const double theta = 2.0 * kPi * uniform01(rng);
    pts.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return pts;
}

std::vector<Building> sample_buildings(const BuildingModel& model, double radius, Rng& rng) {
  const auto centers = sample_ppp_disk(model.blockage.lambda_b, radius, rng);
  std::vector<Building> out;
  out.reserve(centers.size());
  for (const Point2& c : centers) out.push_back(draw_building(model, c, rng));
  return out;
}

Building draw_building(const BuildingModel& model, Point2 center, Rng& rng) {
  Building b;
  b.center = center;
  b.length = draw_size(model.length_law, model.blockage.mean_length, rng);
  b.width = draw_size(model.width_law, model.blockage.mean_width, rng);
  b.orientation = 2.0 * kPi * (1.0 - uniform01(rng));
  return b;
}

RadialPpp::RadialPpp(double density) : density_(density) {
  if (!(density >= 0.0) || !std::isfinite(density)) throw DomainError("PPP density must be >= 0");
}

Point2 RadialPpp::next(Rng& rng) {
  if (density_ == 0.0) {
    r2_ = std::numeric_limits<double>::infinity();
    return {r2_, 0.0};
  }
  r2_ -= std::log1p(-uniform01(rng)) / (density_ * kPi);
  const double r = std::sqrt(r2_);
  const double theta = 2.0 * kPi * uniform01(rng);
  return {r * std::cos(theta), r * std::sin(theta)};
}

bool contains(const Building& b, Point2 pt) {
  const double c = std::cos(b.orientation);
  const double s = std::sin(b.orientation);
  const double dx = pt.x - b.center.x;
  const double dy = pt.y - b.center.y;
  return std::abs(dx * c + dy * s) <= 0.5 * b.length &&
         std::abs(-dx * s + dy * c) <= 0.5 * b.width;
}

bool intersects(const Segment2& seg, const Building& b) {
  const double c = std::cos(b.orientation);
  const double s = std::sin(b.orientation);
  auto local = [&](Point2 p) {
    const double dx = p.x - b.center.x;
    const double dy = p.y - b.center.y;
    return Point2{dx * c + dy * s, -dx * s + dy * c};
  };
  const Point2 a0 = local(seg.from);
  const Point2 a1 = local(seg.to);
  const Point2 mid{0.5 * (a0.x + a1.x), 0.5 * (a0.y + a1.y)};
  const Point2 half{0.5 * (a1.x - a0.x), 0.5 * (a1.y - a0.y)};
  const double ex = 0.5 * b.length;
  const double ey = 0.5 * b.width;
  if (std::abs(mid.x) > ex + std::abs(half.x)) return false;
  if (std::abs(mid.y) > ey + std::abs(half.y)) return false;
  return std::abs(mid.x * half.y - mid.y * half.x) <= ex * std::abs(half.y) + ey * std::abs(half.x);
}

bool is_blocked(const Segment2& s, std::span<const Building> buildings) {
  return std::any_of(buildings.begin(), buildings.end(),
                     [&](const Building& b) { return intersects(s, b); });
}

std::optional<RisHit> nearest_visible_ris(Point2 user, std::span<const Point2> ris,
                                          const BlockageParams& b, Rng& rng) {
  std::optional<RisHit> best;
  for (std::size_t i = 0; i < ris.size(); ++i) {
    const double w = distance(user, ris[i]);
    if (best && w >= best->distance) continue;
    if (uniform01(rng) < los_probability(w, b)) best = RisHit{i, w};
  }
  return best;
}

std::optional<RisHit> nearest_visible_ris(Point2 user, std::span<const Point2> ris,
                                          std::span<const Building> buildings) {
  std::vector<std::size_t> order(ris.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(ris.size());
  for (std::size_t i = 0; i < ris.size(); ++i) dist[i] = distance(user, ris[i]);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  });

  // A building can only touch a segment of length w from the user when its
  // centre lies within w plus its half diagonal.
  struct Reach {
    double reach;
    std::size_t index;
  };
  std::vector<Reach> reach(buildings.size());
  for (std::size_t k = 0; k < buildings.size(); ++k) {
    const Building& bk = buildings[k];
    reach[k] = {distance(user, bk.center) - 0.5 * std::hypot(bk.length, bk.width), k};
  }
  std::sort(reach.begin(), reach.end(), [](const Reach& a, const Reach& b) {
    return a.reach < b.reach || (a.reach == b.reach && a.index < b.index);
  });

  for (std::size_t i : order) {
    const Segment2 seg{user, ris[i]};
    bool blocked = false;
    for (const Reach& r : reach) {
      if (r.reach > dist[i]) break;
      if (intersects(seg, buildings[r.index])) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return RisHit{i, dist[i]};
  }
  return std::nullopt;
}

double hap_window_radius(double lambda_hap, double tail) {
  require_positive(lambda_hap, "lambda_hap");
  return std::sqrt(std::log(1.0 / tail) / (lambda_hap * kPi));
}

double ris_window_radius(double mu_ris, const BlockageParams& b, double tail) {
  require_positive(mu_ris, "mu_ris");
  const double scale = 1.0 / std::sqrt(mu_ris);
  // Mass of visible RISs beyond r (any of them could otherwise be missed).
  double r_outside = kInf;
  if (b.upsilon > 0.0) {
    r_outside = solve_radius(
        [&](double r) {
          const double u = b.upsilon;
          const double expected_outside =
              2.0 * kPi * mu_ris * std::exp(-b.p) * std::exp(-u * r) * (r / u + 1.0 / (u * u));
          return expected_outside < tail;
        },
        scale);
  }
  // Chance that no visible RIS lies inside r at all.
  double r_none = kInf;
  if (void_probability(mu_ris, b) < tail) {
    r_none = solve_radius(
        [&](double r) { return std::exp(-2.0 * kPi * mu_ris * shadow_integral(r, b)) < tail; },
        scale);
  }
  const double r = std::min(r_outside, r_none);
  if (!std::isfinite(r)) throw NumericalError("could not size the RIS sampling window");
  return r;
}

}  // namespace hapris::geometry
