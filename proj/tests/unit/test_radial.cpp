#include "doctest.h"
#include "shellqft/errors.hpp"
#include "shellqft/mode_mesh.hpp"
#include "shellqft/radial_modes.hpp"
#include "shellqft/validation.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace shellqft;
using doctest::Approx;

namespace {
const auto shell = SpacetimeModel::shell(0.5, 3.0);
constexpr double two_pi = 2.0 * std::numbers::pi;

SolverOptions numeric() {
  SolverOptions o;
  o.analytic_flat = false;
  return o;
}

std::vector<AsymptoticSample> sinusoid(double C, double k, double omega,
                                       double theta, int n = 64) {
  std::vector<AsymptoticSample> s;
  for (int i = 0; i < n; ++i) {
    const double x = 40.0 + two_pi / omega * i / n;
    s.push_back({x, C * std::sin(k * x + theta),
                 C * k * std::cos(k * x + theta), omega});
  }
  return s;
}
} // namespace

TEST_CASE("interior seed") {
  const double sf = std::sqrt(2.0 / 3.0);
  auto v = interior_solution(shell, 1.0, 0, 0.0);
  CHECK(v.psi == 1.0);
  CHECK(v.dpsi_drstar == 0.0);
  CHECK(interior_solution(shell, 1.0, 1, 0.0).psi == 0.0);
  v = interior_solution(shell, 1.0, 0, 3.0);
  CHECK(v.psi == Approx(std::sin(3.0) / 3.0).epsilon(1e-14));
  // d/dr* = sqrt f(R) d/dr, j_0' = (x cos x - sin x)/x^2
  CHECK(v.dpsi_drstar ==
        Approx(sf * (3.0 * std::cos(3.0) - std::sin(3.0)) / 9.0).epsilon(1e-13));
  CHECK_THROWS_AS(interior_solution(shell, 1.0, 0, 3.5), DomainError);
  CHECK_THROWS_AS(interior_solution(shell, 0.0, 0, 1.0), DomainError);
}

TEST_CASE("jump across the shell") {
  CHECK(shell_jump_coefficient(shell) ==
        Approx(2.0 / 3.0 - std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK(shell_jump_coefficient(shell) == Approx(-0.149830).epsilon(1e-5));
  CHECK(apply_shell_jump(shell, 0.14112, -0.808325) ==
        Approx(-0.829467).epsilon(1e-5));
  CHECK(apply_shell_jump(shell, 0.0, -0.808325) == -0.808325);
  const auto z = SpacetimeModel::shell(0.0, 3.0);
  CHECK(apply_shell_jump(z, 0.7, 0.3) == 0.3);
  CHECK(shell_jump_coefficient(SpacetimeModel::flat()) == 0.0);
  CHECK(shell_jump_coefficient(shell, JumpConvention::FluxConserving) ==
        Approx((2.0 / 3.0 - std::sqrt(2.0 / 3.0)) / 3.0).epsilon(1e-15));
}

TEST_CASE("flat exterior is harmonic") {
  const double w = 1.7, rho = 0.4, d = -0.9;
  const auto end = integrate_exterior(SpacetimeModel::flat(), w, 0,
                                      {1.0, rho, d}, 41.0, numeric());
  const double dr = 40.0;
  CHECK(end.rho == Approx(rho * std::cos(w * dr) + d / w * std::sin(w * dr))
                       .epsilon(1e-9));
  CHECK(end.drho == Approx(-rho * w * std::sin(w * dr) + d * std::cos(w * dr))
                        .epsilon(1e-9));
}

TEST_CASE("high-frequency amplitude is adiabatically invariant") {
  // omega^2 >> max V: the WKB amplitude sqrt(rho^2 k + drho^2/k) stays fixed
  const double w = 60.0;
  const auto g = MatchingGeometry::from_spacetime(shell, numeric());
  RadialState s{3.0, 0.3, 20.0};
  auto wkb = [&](const RadialState &x) {
    const double k = std::sqrt(w * w - g.potential(0, x.r));
    return std::sqrt(x.rho * x.rho * k + x.drho * x.drho / k);
  };
  const double a0 = wkb(s);
  ExteriorPropagator p(g, w, 0, numeric());
  double worst = 0.0;
  p.advance_r(s, 40.0, [&](const RadialState &x) {
    worst = std::max(worst, std::abs(wkb(x) / a0 - 1.0));
  });
  CHECK(worst < 1e-6);
}

TEST_CASE("exterior integration agrees with an independent integrator") {
  namespace odeint = boost::numeric::odeint;
  const double wl = 1.0;
  const double f_R = 2.0 / 3.0;
  const double w = wl * std::sqrt(f_R);
  const auto in = interior_solution(shell, wl, 0, 3.0);
  const double rho0 = 3.0 * in.psi;
  // d(r psi)/dr* = sqrt f (psi + r psi')
  const double d_in = 3.0 * in.dpsi_drstar + std::sqrt(f_R) * in.psi;
  const double d0 = apply_shell_jump(shell, rho0, d_in);

  using State = std::vector<double>;
  State y{rho0, d0};
  auto sys = [&](const State &x, State &dx, double r) {
    const double f = 1.0 - 1.0 / r;
    const double V = f * (1.0 / (r * r * r));
    dx[0] = x[1] / f;
    dx[1] = (V - w * w) * x[0] / f;
  };
  odeint::integrate_adaptive(
      odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-14, 1e-14),
      sys, y, 3.0, 80.0, 1e-3);

  const auto end = integrate_exterior(shell, w, 0, {3.0, rho0, d0}, 80.0);
  CHECK(std::isfinite(end.rho));
  CHECK(end.rho == Approx(y[0]).epsilon(1e-8));
  CHECK(end.drho == Approx(y[1]).epsilon(1e-8));
}

TEST_CASE("amplitude extraction") {
  const double w = 1.3;
  auto fit = extract_amplitude(sinusoid(2.0, w, w, 0.4), w);
  CHECK(fit.amplitude == Approx(2.0).epsilon(1e-14));
  CHECK(fit.spread < 1e-14);
  CHECK(fit.phase == Approx(0.4).epsilon(1e-12));

  fit = extract_amplitude(sinusoid(7.0, w, w, 5.9), w);
  CHECK(fit.amplitude == Approx(7.0).epsilon(1e-14));
  CHECK(fit.phase == Approx(5.9).epsilon(1e-12));

  // residual potential V = 1e-8 omega^2 seen through the bare fit
  const double k = w * std::sqrt(1.0 - 1e-8);
  fit = extract_amplitude(sinusoid(1.0, k, w, 0.0), w);
  CHECK(std::abs(fit.amplitude - 1.0) < 1e-6);

  // not yet asymptotic: strong residual potential
  CHECK_THROWS_WITH_AS(extract_amplitude(sinusoid(1.0, 0.8 * w, w, 0.0), w),
                       doctest::Contains("asymptotic region not reached"),
                       NumericalError);
}

TEST_CASE("flat space numerical amplitude is 2 omega") {
  const auto o = numeric();
  for (int l = 0; l <= 2; ++l)
    for (double w : {0.05, 0.4, 2.0, 9.0}) {
      const auto m = solve_mode(SpacetimeModel::flat(), w, l, o);
      CHECK(std::abs(m.amplitude / (2.0 * w) - 1.0) < 1e-6);
    }
  const auto a = solve_mode(SpacetimeModel::flat(), 3.3, 2);
  CHECK(a.analytic);
  CHECK(a.amplitude == 6.6);
}

TEST_CASE("jump-only toy model") {
  const auto g = toy_geometry({0.5, 3.0});
  const auto m = solve_mode(g, 1.0, 0, numeric());
  CHECK(m.amplitude == Approx(1.9499956).epsilon(1e-7));
  CHECK(m.amplitude == Approx(1.95002).epsilon(2e-5));
}

TEST_CASE("at high frequency the jump dominates the deviation from flat space") {
  // the potential scatters like V/w^2 while the jump acts like k/w~: the shell
  // follows the jump-only model ever more closely, and w~ |A/2w~ - 1| stays
  // finite (the deviation itself still falls off like 1/w~)
  auto window = [](double a, double &dev, double &to_toy) {
    dev = 0.0;
    to_toy = 0.0;
    for (double w = a; w < a + 2.5; w += 0.05) {
      const double A = solve_mode(shell, w, 0).amplitude;
      dev = std::max(dev, std::abs(A / (2.0 * w) - 1.0));
      to_toy = std::max(to_toy, std::abs(A / toy_amplitude({0.5, 3.0}, w) - 1));
    }
  };
  double d10, t10, d50, t50;
  window(10.0, d10, t10);
  window(47.5, d50, t50);
  CHECK(t10 < 0.05 * d10);
  CHECK(t50 < 0.05 * d50);
  CHECK(t50 / d50 < t10 / d10);
  CHECK(10.0 * d10 == Approx(47.5 * d50).epsilon(0.15));
  CHECK(d50 > 1e-3);
}

TEST_CASE("amplitude does not depend on the seed scale") {
  SolverOptions o;
  const double a = solve_mode(shell, 1.7, 1, o).amplitude;
  o.seed_scale = 1e5;
  CHECK(solve_mode(shell, 1.7, 1, o).amplitude == Approx(a).epsilon(1e-9));
  o.seed_scale = 3e-4;
  CHECK(solve_mode(shell, 1.7, 1, o).amplitude == Approx(a).epsilon(1e-9));
}

TEST_CASE("small mass approaches flat space") {
  const auto s = SpacetimeModel::shell(1e-6, 3.0);
  for (double w : {0.2, 1.0, 5.0})
    CHECK(std::abs(solve_mode(s, w, 0).amplitude / (2.0 * w) - 1.0) < 1e-4);
}

TEST_CASE("profile obeys the interface conditions") {
  SolverOptions o;
  o.record_profile = true;
  const auto g = MatchingGeometry::from_spacetime(shell, o);
  for (double w : {0.01, 0.7, 3.0, 15.0}) {
    const auto m = solve_mode(g, w, 0, o);
    const auto r = measure_jump_residual(g, m, o);
    CHECK(r.jump < 1e-8);
    CHECK(r.continuity < 1e-8);
    // the two samples at R carry the one-sided derivatives
    std::vector<ProfileSample> at;
    for (const auto &p : m.profile)
      if (p.r == 3.0)
        at.push_back(p);
    REQUIRE(at.size() == 2);
    CHECK(at[0].rho == Approx(at[1].rho).epsilon(1e-14));
    CHECK(at[1].drho - at[0].drho ==
          Approx(g.jump_coefficient() * at[0].rho).epsilon(1e-12));
    // normalised so that rho -> 2 sin(omega r* + theta)
    const auto &last = m.profile.back();
    const double C = std::hypot(last.rho, last.drho / m.omega);
    CHECK(C == Approx(2.0).epsilon(1e-5));
  }

  // measuring against the other convention is caught
  const auto flux = MatchingGeometry::from_spacetime(
      shell, [] {
        SolverOptions x;
        x.jump = JumpConvention::FluxConserving;
        return x;
      }());
  const auto m = solve_mode(flux, 3.0, 0, o);
  CHECK(measure_jump_residual(g, m, o).jump > 1e-3);
}

TEST_CASE("invalid mode requests") {
  CHECK_THROWS_AS(solve_mode(shell, 0.0, 0), DomainError);
  CHECK_THROWS_AS(solve_mode(shell, -1.0, 0), DomainError);
  CHECK_THROWS_AS(solve_mode(shell, 1.0, -1), DomainError);
  SolverOptions o;
  o.step.max_steps = 100;
  CHECK_THROWS_AS(solve_mode(shell, 1.0, 0, o), NumericalError);
}
