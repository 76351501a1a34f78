#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "hapris/errors.hpp"
#include "hapris/geometry.hpp"

using namespace hapris;
using namespace hapris::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

BlockageParams urban() { return BlockageParams::from_buildings(200e-6, 25.0, 25.0); }

// E[(w^2 + h^2)^{-t eta / 4}] for the nearest of a PPP, after u = lambda pi w^2.
double hap_moment_oracle(double t, double eta, double h, double lambda) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(
      [&](double u) { return std::exp(-u) * std::pow(u / (lambda * kPi) + h * h, -0.25 * t * eta); });
}

double visible_integral(double from, double to, double mu, const BlockageParams& b,
                        double t = 0.0, double eps = 3.0, double h = 50.0) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double w) { return std::pow(w * w + h * h, -0.25 * t * eps) * pdf_nearest_visible_ris(w, mu, b); },
      from, to, 15, 1e-13);
}

}  // namespace

TEST_CASE("blockage constants from building statistics") {
  const auto b = urban();
  CHECK(b.upsilon == doctest::Approx(2.0 * 200e-6 * 50.0 / kPi).epsilon(1e-15));
  CHECK(b.p == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(los_probability(0.0, b) == doctest::Approx(std::exp(-0.125)).epsilon(1e-15));
  CHECK(los_probability(100.0, b) == doctest::Approx(std::exp(-(100.0 * b.upsilon + 0.125))).epsilon(1e-15));
  BlockageParams bad = b;
  bad.upsilon = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("nearest visible RIS law") {
  const auto b = urban();
  const double mu = 50e-6;
  const double pv = void_probability(mu, b);
  CHECK(pv == doctest::Approx(std::exp(-2.0 * kPi * mu * std::exp(-b.p) / (b.upsilon * b.upsilon))).epsilon(1e-14));
  CHECK(pv == doctest::Approx(1.0693e-3).epsilon(1e-3));

  for (double w : {0.0, 1.0, 37.0, 150.0, 600.0, 3000.0}) {
    CAPTURE(w);
    CHECK(pdf_nearest_visible_ris(w, mu, b) >= 0.0);
    CHECK(cdf_nearest_visible_ris(w, mu, b) == doctest::Approx(visible_integral(0.0, w, mu, b)).epsilon(1e-11));
  }
  const double mass = visible_integral(0.0, 1000.0, mu, b) + visible_integral(1000.0, 20000.0, mu, b);
  CHECK(std::abs(mass - (1.0 - pv)) < 1e-9);
  CHECK(cdf_nearest_visible_ris(INFINITY, mu, b) == doctest::Approx(1.0 - pv).epsilon(1e-15));
}

TEST_CASE("no blockage reduces to the plain nearest-neighbour law") {
  const BlockageParams none = BlockageParams::from_buildings(0.0, 25.0, 25.0);
  CHECK(none.upsilon == 0.0);
  CHECK(none.p == 0.0);
  const double mu = 50e-6;
  CHECK(void_probability(mu, none) == 0.0);
  for (double w : {1.0, 50.0, 120.0, 400.0}) {
    CHECK(cdf_nearest_visible_ris(w, mu, none) == doctest::Approx(-std::expm1(-mu * kPi * w * w)).epsilon(1e-13));
    CHECK(pdf_nearest_visible_ris(w, mu, none) == doctest::Approx(pdf_nearest_hap(w, mu)).epsilon(1e-13));
  }
}

TEST_CASE("RIS distance moments") {
  const auto b = urban();
  const double mu = 50e-6;
  CHECK(moment_rg(0.0, 3.0, 50.0, mu, b) == doctest::Approx(1.0 - void_probability(mu, b)).epsilon(1e-10));
  for (double t : {1.0, 2.0}) {
    for (double h : {10.0, 50.0, 100.0}) {
      CAPTURE(t);
      CAPTURE(h);
      const double ref = visible_integral(0.0, 1000.0, mu, b, t, 3.0, h) + visible_integral(1000.0, 20000.0, mu, b, t, 3.0, h);
      CHECK(moment_rg(t, 3.0, h, mu, b) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(moment_rg(1.0, 3.0, 0.0, mu, b), DomainError);
}

TEST_CASE("HAP distance law and moments") {
  const double lam = 5e-6;
  CHECK(cdf_nearest_hap(300.0, lam) == doctest::Approx(-std::expm1(-lam * kPi * 9e4)).epsilon(1e-15));
  const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double w) { return pdf_nearest_hap(w, lam); }, 0.0, 5000.0, 15, 1e-14);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  for (double t : {1.0, 2.0}) {
    for (double eta : {2.0, 3.0}) {
      for (double h : {20e3, 50e3, 49950.0}) {
        for (double l : {1e-6, 5e-6}) {
          CAPTURE(t);
          CAPTURE(eta);
          CAPTURE(h);
          CAPTURE(l);
          const double closed = moment_r(t, eta, h, l);
          CHECK(closed == doctest::Approx(hap_moment_oracle(t, eta, h, l)).epsilon(1e-10));
          CHECK(std::abs(closed / moment_r_quadrature(t, eta, h, l) - 1.0) <= 1e-8);
        }
      }
    }
  }
  // Degenerate limit: far-away platforms make R ~ H.
  CHECK(moment_r(1.0, 3.0, 50e3, 1.0) == doctest::Approx(std::pow(50e3, -1.5)).epsilon(1e-6));
}

TEST_CASE("PPP sampling on a disk and in radial order") {
  Rng rng = make_substream(3, 0);
  CHECK(sample_ppp_disk(0.0, 100.0, rng).empty());
  CHECK_THROWS_AS(sample_ppp_disk(1.0, 0.0, rng), DomainError);

  const double density = 1e-3, radius = 200.0;
  const double mean = density * kPi * radius * radius;
  double count = 0.0, count2 = 0.0;
  std::vector<double> r;
  double farthest = 0.0;
  const int reps = 2000;
  for (int i = 0; i < reps; ++i) {
    const auto pts = sample_ppp_disk(density, radius, rng);
    count += static_cast<double>(pts.size());
    count2 += static_cast<double>(pts.size() * pts.size());
    for (const auto& p : pts) {
      farthest = std::max(farthest, std::hypot(p.x, p.y));
      if (r.size() < 50000) r.push_back(std::hypot(p.x, p.y));
    }
  }
  CHECK(farthest <= radius);
  count /= reps;
  const double var = count2 / reps - count * count;
  CHECK(std::abs(count - mean) < 4.0 * std::sqrt(mean / reps));
  CHECK(var == doctest::Approx(mean).epsilon(0.1));
  std::sort(r.begin(), r.end());
  CHECK(ks_statistic(r, [&](double x) { return x * x / (radius * radius); }) < 0.01);

  // First radial point follows the nearest-neighbour law; counts within R are Poisson.
  std::vector<double> first;
  double inside = 0.0;
  for (int i = 0; i < 20000; ++i) {
    RadialPpp ppp(density);
    ppp.next(rng);
    first.push_back(ppp.last_radius());
    int n = 1;
    while (ppp.last_radius() <= radius) {
      ppp.next(rng);
      ++n;
    }
    inside += n - 1;
  }
  std::sort(first.begin(), first.end());
  CHECK(ks_statistic(first, [&](double w) { return cdf_nearest_hap(w, density); }) < 0.015);
  CHECK(std::abs(inside / 20000.0 - mean) < 4.0 * std::sqrt(mean / 20000.0));
  RadialPpp empty(0.0);
  empty.next(rng);
  CHECK(std::isinf(empty.last_radius()));
}

TEST_CASE("rectangle containment and segment intersection") {
  const Building axis{{0.0, 0.0}, 10.0, 4.0, 2.0 * kPi};
  CHECK(contains(axis, {4.9, 1.9}));
  CHECK_FALSE(contains(axis, {5.1, 0.0}));
  CHECK(intersects({{-10.0, 0.0}, {10.0, 0.0}}, axis));
  CHECK(intersects({{0.0, -10.0}, {0.0, 10.0}}, axis));
  CHECK_FALSE(intersects({{-10.0, 3.0}, {10.0, 3.0}}, axis));
  CHECK_FALSE(intersects({{6.0, -10.0}, {6.0, 10.0}}, axis));
  CHECK(intersects({{1.0, 1.0}, {2.0, 1.0}}, axis));  // fully inside
  CHECK_FALSE(intersects({{-20.0, 0.0}, {-6.0, 0.0}}, axis));  // collinear, short of the box

  const Building rotated{{0.0, 0.0}, 10.0, 2.0, kPi / 4.0};
  CHECK(contains(rotated, {3.0, 3.0}));
  CHECK_FALSE(contains(rotated, {3.0, -3.0}));
  CHECK(intersects({{3.0, 3.0}, {10.0, 3.0}}, rotated));
  CHECK_FALSE(intersects({{2.0, -2.0}, {10.0, -2.0}}, rotated));
  // Diagonal corner-to-corner miss.
  CHECK_FALSE(intersects({{-6.0, 6.0}, {-1.5, 6.0}}, rotated));
}

TEST_CASE("nearest visible RIS selection") {
  const std::vector<Point2> ris{{10.0, 0.0}, {0.0, 20.0}, {-30.0, 0.0}};
  const std::vector<Building> scene{{{5.0, 0.0}, 2.0, 2.0, 2.0 * kPi}};
  const auto hit = nearest_visible_ris({0.0, 0.0}, ris, scene);
  REQUIRE(hit.has_value());
  CHECK(hit->index == 1);
  CHECK(hit->distance == doctest::Approx(20.0));
  const std::vector<Building> wall{{{0.0, 0.0}, 100.0, 100.0, 2.0 * kPi}};
  CHECK_FALSE(nearest_visible_ris({0.0, 0.0}, ris, wall).has_value());

  Rng rng = make_substream(1, 1);
  const auto clear = nearest_visible_ris({0.0, 0.0}, ris, BlockageParams::from_buildings(0.0, 1.0, 1.0), rng);
  REQUIRE(clear.has_value());
  CHECK(clear->index == 0);
}

TEST_CASE("building scenes") {
  Rng rng = make_substream(5, 0);
  BuildingModel model;
  model.blockage = urban();
  model.length_law = {SizeLaw::uniform, 0.5};
  model.width_law = {SizeLaw::exponential, 0.0};
  double len = 0.0, wid = 0.0;
  int n = 0;
  bool in_range = true;
  for (int i = 0; i < 20; ++i) {
    for (const auto& b : sample_buildings(model, 500.0, rng)) {
      len += b.length;
      wid += b.width;
      ++n;
      in_range = in_range && b.orientation > 0.0 && b.orientation <= 2.0 * kPi && b.length >= 12.5 && b.length <= 37.5;
    }
  }
  CHECK(in_range);
  CHECK(len / n == doctest::Approx(25.0).epsilon(0.02));
  CHECK(wid / n == doctest::Approx(25.0).epsilon(0.05));
  model.length_law = {};
  model.width_law = {};
  CHECK(model.max_half_diagonal() == doctest::Approx(0.5 * std::hypot(25.0, 25.0)));
}

TEST_CASE("sampling windows") {
  const double r = hap_window_radius(5e-6);
  CHECK(std::exp(-5e-6 * kPi * r * r) == doctest::Approx(1e-6).epsilon(1e-9));
  const auto b = urban();
  const double rr = ris_window_radius(50e-6, b);
  const double u = b.upsilon;
  const double outside = 2.0 * kPi * 50e-6 * std::exp(-b.p) * std::exp(-u * rr) * (rr / u + 1.0 / (u * u));
  CHECK(outside <= 1.0000001e-6);
  CHECK(rr > 1000.0);
}
