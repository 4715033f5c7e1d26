#include "doctest.h"
#include "shellqft/errors.hpp"
#include "shellqft/response.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <numbers>

using namespace shellqft;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
const auto shell = SpacetimeModel::shell(0.5, 3.0);

const ModeMesh &flat_mesh() {
  static const ModeMesh m = [] {
    MeshOptions o;
    o.omega_max = 130.0;
    return build_mode_mesh(SpacetimeModel::flat(), 0, o);
  }();
  return m;
}

const ModeMesh &shell_mesh() {
  static const ModeMesh m = [] {
    MeshOptions o;
    o.omega_max = 30.0;
    return build_mode_mesh(shell, 0, o);
  }();
  return m;
}
} // namespace

TEST_CASE("flat response at zero gap") {
  for (double s : {0.2, 0.5, 1.0, 3.0})
    CHECK(flat_response_gaussian(s, 0.0) == Approx(1.0 / (4.0 * pi)).epsilon(1e-15));
  const auto p = response_center(flat_mesh(), SwitchingSpec::gaussian(0.5), 0.0);
  CHECK(p.value == Approx(1.0 / (4.0 * pi)).epsilon(1e-10));
}

TEST_CASE("closed form against an independent quadrature") {
  boost::math::quadrature::exp_sinh<long double> es;
  for (double s : {0.2, 0.5, 1.0})
    for (double gap : {-5.0, -1.0, 0.0, 0.7, 3.0}) {
      const long double ls = s, lg = gap;
      const long double v = es.integrate([&](long double w) {
        const long double z = ls * (lg + w);
        return w / (2 * std::numbers::pi_v<long double>) * ls * ls *
               std::exp(-z * z);
      });
      CHECK(flat_response_gaussian(s, gap) == Approx(double(v)).epsilon(1e-12));
    }
}

TEST_CASE("numerical flat response matches the closed form") {
  double worst = 0.0;
  for (double s : {0.2, 0.5, 1.0})
    for (double gap = -5.0; gap <= 5.0; gap += 0.5) {
      const double F =
          response_center(flat_mesh(), SwitchingSpec::gaussian(s), gap).value;
      worst = std::max(worst, std::abs(F / flat_response_gaussian(s, gap) - 1));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("shell response properties") {
  const auto g = SwitchingSpec::gaussian(0.5);
  const auto u = UnitSystem::local_hawking(shell);
  CHECK(response_center(shell_mesh(), g, 20.0).value < 1e-40);
  for (double x = -20.0; x <= 20.0; x += 2.5) {
    const auto p =
        response_center(shell_mesh(), g, u.to_natural(x, EnergyUnit::LocalHawking));
    CHECK(p.value > 0.0);
    CHECK(p.error <= 1e-8 * p.value + 1e-300);
  }
  // decreasing in the gap
  double prev = INFINITY;
  for (double x = -6.0; x <= 6.0; x += 0.25) {
    const double v = response_center(shell_mesh(), g, x).value;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("response quadrature converges") {
  const auto g = SwitchingSpec::gaussian(0.5);
  ResponseOptions coarse, fine;
  coarse.quadrature.rel = 1e-7;
  fine.quadrature.rel = 1e-12;
  for (double gap : {-3.0, 0.0, 2.0}) {
    const auto a = response_center(shell_mesh(), g, gap, coarse);
    const auto b = response_center(shell_mesh(), g, gap, fine);
    CHECK(std::abs(a.value - b.value) <= a.error + b.error);
    CHECK(std::abs(a.value / b.value - 1.0) < 1e-7);
  }
}

TEST_CASE("mesh must cover the quadrature support") {
  MeshOptions o;
  o.omega_max = 10.0;
  const auto m = build_mode_mesh(SpacetimeModel::flat(), 0, o);
  CHECK_THROWS_AS(response_center(m, SwitchingSpec::gaussian(0.5), 0.0),
                  DomainError);
  CHECK(required_omega_max(SwitchingSpec::gaussian(0.5), {-3.0, 2.0}) ==
        Approx(27.0));
}

TEST_CASE("flat response off centre equals the centre value") {
  const auto sw = SwitchingSpec::gaussian(1.0);
  const std::vector<double> gaps{0.0};
  MeshOptions o;
  o.r_det = 2.0;
  o.omega_max = required_omega_max(sw, gaps);
  std::vector<ModeMesh> meshes;
  for (int l = 0; l <= required_l_max(sw, gaps, 2.0); ++l)
    meshes.push_back(build_mode_mesh(SpacetimeModel::flat(), l, o));
  const auto r = response_at_radius(meshes, sw, 0.0);
  CHECK(r.point.value == Approx(1.0 / (4.0 * pi)).epsilon(1e-8));
  CHECK(r.truncation <= 1e-10);

  // close to the centre only l = 0 survives
  o.r_det = 1e-4;
  std::vector<ModeMesh> near;
  for (int l = 0; l <= required_l_max(sw, gaps, 1e-4); ++l)
    near.push_back(build_mode_mesh(SpacetimeModel::flat(), l, o));
  CHECK(response_at_radius(near, sw, 0.0).point.value ==
        Approx(1.0 / (4.0 * pi)).epsilon(1e-7));

  // too few meshes
  meshes.resize(3);
  CHECK_THROWS_AS(response_at_radius(meshes, sw, 0.0), NumericalError);
}

TEST_CASE("shell response off centre is finite and close to the centre") {
  const auto sw = SwitchingSpec::gaussian(2.0);
  const std::vector<double> gaps{0.0};
  MeshOptions o;
  o.points_per_period = 8;
  o.check_refinement = false;
  o.solver.potential_tol = 1e-5;
  o.omega_max = required_omega_max(sw, gaps);
  auto at = [&](double r) {
    o.r_det = r;
    std::vector<ModeMesh> m;
    for (int l = 0; l <= required_l_max(sw, gaps, r); ++l)
      m.push_back(build_mode_mesh(shell, l, o));
    return response_at_radius(m, sw, 0.0).point.value;
  };
  const double edge = at(2.9), inner = at(1.0);
  CHECK(std::isfinite(edge));
  CHECK(edge > 0.0);
  CHECK(edge == Approx(inner).epsilon(0.2));
}

TEST_CASE("zero mass shell reproduces flat space") {
  const auto sw = SwitchingSpec::gaussian(0.5);
  MeshOptions o;
  o.omega_max = 20.0;
  const auto sweep =
      gap_sweep(SpacetimeModel::shell(0.0, 3.0), sw, {-2.0, 0.0, 1.5}, o);
  for (double d : sweep.rel_diff)
    CHECK(std::abs(d) < 1e-8);
}

TEST_CASE("curves are deterministic") {
  const auto sw = SwitchingSpec::gaussian(0.5);
  const std::vector<double> gaps{-1.0, 0.0, 1.0, 2.0};
  const auto a = evaluate_curve(shell_mesh(), sw, gaps, {}, 1);
  const auto b = evaluate_curve(shell_mesh(), sw, gaps, {}, 3);
  CHECK(a.values == b.values);
}

TEST_CASE("wide switching concentrates on the resonant mode") {
  // sigma -> infinity: F -> (w~/2pi) w(w~) sigma sqrt(pi) at w~ = -gap,
  // and nothing for a positive gap
  const double gap = -2.0;
  const auto wide = SwitchingSpec::gaussian(40.0);
  const double F = response_center(shell_mesh(), wide, gap).value;
  const double w = -gap;
  const double expected =
      w / (2.0 * pi) * shell_mesh().weight_at(w) * std::sqrt(pi) * 40.0;
  CHECK(F == Approx(expected).epsilon(2e-3));
  const auto a = adiabatic_limit_weight(gap);
  CHECK(a.selected_omega == w);
  CHECK(response_center(shell_mesh(), wide, 1.0).value < 1e-300);
}
