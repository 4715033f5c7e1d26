#include "doctest.h"
#include "shellqft/errors.hpp"
#include "shellqft/switching.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace shellqft;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("closed-form transforms") {
  const auto g = SwitchingSpec::gaussian(0.5);
  CHECK(g.ft_squared(0.0) == Approx(0.25).epsilon(1e-15));
  CHECK(g.ft_squared(20.0) == Approx(0.25 * std::exp(-100.0)).epsilon(1e-13));
  CHECK(g.ft(0.0) == Approx(0.5).epsilon(1e-15));
  const auto l = SwitchingSpec::lorentzian(0.5);
  CHECK(l.ft_squared(0.0) == Approx(pi / 2 * 0.25).epsilon(1e-15));
  CHECK(l.ft_squared(3.0) ==
        Approx(pi / 2 * 0.25 * std::exp(-3.0)).epsilon(1e-14));
  CHECK(l.has_cusp());
  CHECK_FALSE(g.has_cusp());
}

TEST_CASE("transforms against direct Fourier integrals") {
  using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (const auto &sw : {SwitchingSpec::gaussian(0.7),
                         SwitchingSpec::compact_bump(0.7, 3.5)}) {
    const double w = sw.kind() == SwitchingSpec::Kind::Gaussian
                         ? 40.0 * sw.sigma()
                         : sw.support_halfwidth();
    for (double z : {0.0, 0.8, 2.5, 5.0}) {
      const double v = gk::integrate(
          [&](double t) { return sw.profile(t) * std::cos(z * t); }, -w, w, 15,
          1e-15);
      CHECK(sw.ft(z) == Approx(v / std::sqrt(2.0 * pi)).epsilon(1e-10));
    }
  }
}

TEST_CASE("even and positive") {
  for (const auto &sw :
       {SwitchingSpec::gaussian(0.5), SwitchingSpec::lorentzian(0.5),
        SwitchingSpec::compact_bump(0.5, 2.5)})
    for (double z = 0.0; z < 12.0; z += 0.173) {
      CHECK(sw.ft_squared(z) == sw.ft_squared(-z));
      CHECK(sw.profile(z) == sw.profile(-z));
      CHECK(sw.ft_squared(z) >= 0.0);
    }
}

TEST_CASE("Gaussian decay identity") {
  // |chi^(W)|^2 / |chi^(0)|^2 = exp(-sigma^2 W^2)
  for (double s : {0.2, 0.5, 2.0}) {
    const auto g = SwitchingSpec::gaussian(s);
    for (double z : {0.3, 1.0, 4.0})
      CHECK(g.ft_squared(z) / g.ft_squared(0.0) ==
            Approx(std::exp(-s * s * z * z)).epsilon(1e-13));
  }
}

TEST_CASE("transforms decrease away from zero") {
  auto decreasing = [](const SwitchingSpec &sw, double top) {
    double prev = sw.ft_squared(0.0);
    for (double z = 1e-3; z <= top; z += 1e-3) {
      const double v = sw.ft_squared(z);
      if (!(v < prev))
        return false;
      prev = v;
    }
    return true;
  };
  CHECK(decreasing(SwitchingSpec::gaussian(0.5), 12.0 / 0.5 * 0.9));
  CHECK(decreasing(SwitchingSpec::lorentzian(0.5), 69.0 / 0.5));
  // the compact bump transform is entire and has real zeros far out in its
  // tail (below 1e-16 of the peak); it decreases throughout the core
  const auto c = SwitchingSpec::compact_bump(0.5, 2.5);
  CHECK(decreasing(c, 10.0));
  CHECK(c.ft_squared(10.0) < 1e-10 * c.ft_squared(0.0));
}

TEST_CASE("compact bump profile") {
  const auto c = SwitchingSpec::compact_bump(0.5, 2.5);
  const auto g = SwitchingSpec::gaussian(0.5);
  CHECK(c.profile(2.5) == 0.0);
  CHECK(c.profile(3.0) == 0.0);
  CHECK(c.profile(0.0) == 1.0);
  CHECK(c.profile(2.0) == g.profile(2.0)); // untouched core
  CHECK(c.profile(2.3) < g.profile(2.3));
  CHECK(c.profile(2.3) > 0.0);
  CHECK(c.tail_extent() <= 600.0 / 0.5);
  CHECK(SwitchingSpec::gaussian(0.5).tail_extent() == Approx(24.0));
  CHECK(SwitchingSpec::lorentzian(0.5).tail_extent() == Approx(138.0));
}

TEST_CASE("Parseval") {
  CHECK(parseval_check(SwitchingSpec::gaussian(0.5)) < 1e-10);
  CHECK(parseval_check(SwitchingSpec::lorentzian(0.5)) < 1e-10);
  CHECK(parseval_check(SwitchingSpec::compact_bump(0.5, 2.5)) < 1e-8);
  CHECK(SwitchingSpec::gaussian(2.0).energy() ==
        Approx(2.0 * std::sqrt(pi)).epsilon(1e-14));
  CHECK(SwitchingSpec::lorentzian(2.0).energy() ==
        Approx(pi).epsilon(1e-14));
}

TEST_CASE("invalid switching parameters") {
  CHECK_THROWS_AS(SwitchingSpec::gaussian(0.0), DomainError);
  CHECK_THROWS_AS(SwitchingSpec::gaussian(-1.0), DomainError);
  CHECK_THROWS_AS(SwitchingSpec::lorentzian(NAN), DomainError);
  CHECK_THROWS_AS(SwitchingSpec::compact_bump(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(SwitchingSpec::compact_bump(0.5, 2.5, 0.0), DomainError);
  CHECK_THROWS_AS(SwitchingSpec::compact_bump(0.5, 2.5, 1.5), DomainError);
}

TEST_CASE("adiabatic limit selects the resonant mode") {
  auto a = adiabatic_limit_weight(-2.0);
  CHECK(a.excited);
  CHECK(a.selected_omega == 2.0);
  a = adiabatic_limit_weight(1.0);
  CHECK_FALSE(a.excited);
  CHECK(a.selected_omega == 0.0);
  CHECK_FALSE(adiabatic_limit_weight(0.0).excited);
}
