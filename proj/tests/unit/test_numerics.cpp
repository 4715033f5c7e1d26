#include "doctest.h"
#include "shellqft/errors.hpp"
#include "shellqft/ode.hpp"
#include "shellqft/quadrature.hpp"
#include "shellqft/special_functions.hpp"
#include "shellqft/spline.hpp"

#include <cmath>
#include <numbers>

using namespace shellqft;
using doctest::Approx;

TEST_CASE("spherical Bessel functions against the standard library") {
  CHECK(sph_bessel_j(0, 3.0) == Approx(0.0470400027).epsilon(1e-9));
  CHECK(sph_bessel_j(0, 0.0) == 1.0);
  CHECK(sph_bessel_j(3, 0.0) == 0.0);
  double worst = 0.0, worst_d = 0.0;
  for (int l = 0; l <= 40; ++l)
    for (double x = 1e-3; x < 200.0; x *= 1.07) {
      const double ref = std::sph_bessel(unsigned(l), x);
      const double scale = std::max(std::abs(ref), 1e-300);
      if (std::abs(ref) > 1e-250)
        worst = std::max(worst, std::abs(sph_bessel_j(l, x) - ref) /
                                    std::max(scale, 1e-3 / x));
      // j_l' = j_{l-1} - (l+1)/x j_l, or -j_1 for l = 0
      const double dref =
          l == 0 ? -std::sph_bessel(1u, x)
                 : std::sph_bessel(unsigned(l - 1), x) - (l + 1) / x * ref;
      const double dscale =
          std::max({std::abs(dref), std::abs(ref), 1e-3 / x});
      if (std::abs(ref) > 1e-250)
        worst_d = std::max(worst_d,
                           std::abs(sph_bessel_j_prime(l, x) - dref) / dscale);
    }
  // the library itself loses a few digits near zeros at large l
  CHECK(worst < 1e-10);
  // there the high-precision value decides (40-digit reference)
  CHECK(sph_bessel_j(21, 70.52178852748227) ==
        Approx(6.302716731587903e-05).epsilon(1e-13));
  CHECK(worst_d < 1e-10);

  const auto arr = sph_bessel_j_array(12, 7.3);
  REQUIRE(arr.size() == 13);
  for (int l = 0; l <= 12; ++l)
    CHECK(arr[std::size_t(l)] ==
          Approx(std::sph_bessel(unsigned(l), 7.3)).epsilon(1e-12));
}

TEST_CASE("adaptive integrator on the harmonic oscillator") {
  ode::AdaptiveIntegrator<2> in({1e-12, 1e-14});
  auto sys = [](const std::array<double, 2> &y, std::array<double, 2> &d,
                double) {
    d[0] = y[1];
    d[1] = -y[0];
  };
  auto norm = [](const std::array<double, 2> &y,
                 const std::array<double, 2> &e) {
    return std::max(std::abs(e[0]), std::abs(e[1])) /
           (1e-14 + 1e-12 * std::hypot(y[0], y[1]));
  };
  auto cap = [](double, const std::array<double, 2> &) { return 0.5; };
  std::array<double, 2> y{0.0, 1.0};
  double t = 0.0, h = 0.0;
  in.advance(sys, norm, cap, y, t, 100.0, h);
  CHECK(t == 100.0);
  CHECK(std::abs(y[0] - std::sin(100.0)) < 1e-9);
  CHECK(std::abs(y[1] - std::cos(100.0)) < 1e-9);
  // and back again
  in.advance(sys, norm, cap, y, t, 0.0, h);
  CHECK(std::abs(y[0]) < 1e-9);
  CHECK(std::abs(y[1] - 1.0) < 1e-9);
  CHECK(in.statistics().accepted > 0);

  ode::AdaptiveIntegrator<2> tiny({1e-12, 1e-14, 5});
  y = {0.0, 1.0};
  t = 0.0;
  h = 0.0;
  CHECK_THROWS_AS(tiny.advance(sys, norm, cap, y, t, 100.0, h),
                  NumericalError);
}

TEST_CASE("adaptive Gauss-Kronrod quadrature") {
  const double pi = std::numbers::pi;
  auto r = quad::integrate([](double x) { return std::exp(-x * x); }, -10.0,
                           10.0, {1e-13});
  CHECK(r.value == Approx(std::sqrt(pi)).epsilon(1e-13));
  CHECK(r.error < 1e-12);

  // a kink at a break point
  const double br[] = {-1.0, 0.3, 2.0};
  r = quad::integrate([](double x) { return std::abs(x - 0.3); }, br, {1e-13});
  CHECK(r.value == Approx((1.3 * 1.3 + 1.7 * 1.7) / 2.0).epsilon(1e-13));

  // integrable endpoint singularity needs subdivision
  r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                      {1e-8});
  CHECK(r.value == Approx(2.0).epsilon(1e-7));
  CHECK(r.panels > 1);

  CHECK_THROWS_AS(quad::integrate([](double x) { return std::sin(1 / x); },
                                  1e-12, 1.0, {1e-14, 0.0, 50}),
                  NumericalError);
}

TEST_CASE("not-a-knot spline reproduces cubics") {
  std::vector<double> x, y;
  auto p = [](double t) { return 0.5 - t + 2 * t * t - 0.25 * t * t * t; };
  for (double t = 0.0; t <= 5.0; t += 0.37 + 0.05 * t) {
    x.push_back(t);
    y.push_back(p(t));
  }
  const CubicSpline s(x, y);
  for (double t = x.front(); t <= x.back(); t += 0.01)
    CHECK(s(t) == Approx(p(t)).epsilon(1e-11));
  CHECK_THROWS_AS(s(x.back() + 0.1), DomainError);
  CHECK_THROWS_AS(CubicSpline({0, 1, 2}, {0, 1, 2}), DomainError);
  CHECK_THROWS_AS(CubicSpline({0, 1, 1, 2}, {0, 1, 2, 3}), DomainError);
}
