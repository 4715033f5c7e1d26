#include "doctest.h"
#include "shellqft/errors.hpp"
#include "shellqft/validation.hpp"

#include <cmath>
#include <numbers>

using namespace shellqft;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
const auto shell = SpacetimeModel::shell(0.5, 3.0);

SolverOptions numeric() {
  SolverOptions o;
  o.analytic_flat = false;
  return o;
}

// inside rho = sin(w~ r)/w~; outside free waves at w = sqrt(f) w~
double toy_oracle(double M, double R, double wl) {
  const double f = 1.0 - 2.0 * M / R, sf = std::sqrt(f);
  const double rho = std::sin(wl * R) / wl;
  const double d = sf * std::cos(wl * R) + (f - sf) * rho;
  return 2.0 / std::hypot(rho, d / (sf * wl));
}
} // namespace

TEST_CASE("toy closed form") {
  const ToyModelSpec t{0.5, 3.0};
  for (double w : {0.1, 1.0, 4.4, 19.0})
    CHECK(toy_amplitude(t, w) == Approx(toy_oracle(0.5, 3.0, w)).epsilon(1e-14));
  CHECK(toy_amplitude(t, 1.0) == Approx(1.9499956).epsilon(1e-7));
  // without mass the toy is flat space
  const ToyModelSpec z{0.0, 3.0};
  for (double w : {0.3, 2.0, 7.0}) {
    CHECK(toy_amplitude(z, w) == Approx(2.0 * w).epsilon(1e-14));
    CHECK(solve_mode(toy_geometry(z), w, 0, numeric()).amplitude ==
          Approx(2.0 * w).epsilon(1e-8));
  }
  // the pipeline reproduces the toy
  const auto g = toy_geometry(t);
  for (double w : {0.1, 1.0, 4.4, 19.0})
    CHECK(solve_mode(g, w, 0, numeric()).amplitude ==
          Approx(toy_oracle(0.5, 3.0, w)).epsilon(1e-8));
  const auto gf = toy_geometry(t, JumpConvention::FluxConserving);
  CHECK(solve_mode(gf, 1.0, 0, numeric()).amplitude ==
        Approx(toy_amplitude(t, 1.0, JumpConvention::FluxConserving))
            .epsilon(1e-8));
}

TEST_CASE("Klein-Gordon normalisation over many wavelengths") {
  const auto flat = MatchingGeometry::from_spacetime(SpacetimeModel::flat(), numeric());
  const auto sh = MatchingGeometry::from_spacetime(shell, numeric());
  for (const auto *g : {&flat, &sh})
    for (double w : {0.5, 2.0}) {
      const auto m = solve_mode(*g, w, 0, numeric());
      CHECK(kg_norm_check(*g, m, 100.0 * 2.0 * pi / m.omega, numeric()) < 1e-2);
    }
  // analytic flat mode
  const auto a = solve_mode(flat, 1.0, 0);
  CHECK(kg_norm_check(flat, a, 200.0 * pi) < 1e-2);
  // a short window is refused
  const auto m = solve_mode(sh, 1.0, 0, numeric());
  CHECK_THROWS_AS(kg_norm_check(sh, m, 5.0, numeric()), DomainError);
}

TEST_CASE("distinct modes are nearly orthogonal") {
  const auto flat = MatchingGeometry::from_spacetime(SpacetimeModel::flat(), numeric());
  const auto a = solve_mode(flat, 1.0, 0, numeric());
  const auto b = solve_mode(flat, 2.0, 0, numeric());
  const auto r = kg_orthogonality_check(flat, a, b, 500.0, numeric());
  CHECK(r.overlap < 0.02);
  CHECK(r.within());
  const auto sh = MatchingGeometry::from_spacetime(shell, numeric());
  const auto c = solve_mode(sh, 0.8, 0, numeric());
  const auto d = solve_mode(sh, 2.6, 0, numeric());
  CHECK(kg_orthogonality_check(sh, c, d, 500.0, numeric()).within());
}

TEST_CASE("resonance period") {
  MeshOptions o;
  o.omega_max = 16.0;
  const auto m = build_mode_mesh(shell, 0, o);
  const auto r = resonance_period(m);
  REQUIRE(r.found);
  CHECK(r.period == Approx(pi / 3.0).epsilon(2e-2));
  // it scales with 1/R
  const auto m6 = build_mode_mesh(SpacetimeModel::shell(0.5, 6.0), 0, o);
  const auto r6 = resonance_period(m6);
  REQUIRE(r6.found);
  CHECK(r6.period == Approx(pi / 6.0).epsilon(2e-2));
  // flat space has nothing to find
  const auto f = build_mode_mesh(SpacetimeModel::flat(), 0, o);
  CHECK_FALSE(resonance_period(f).found);
}

TEST_CASE("exterior wavenumber convention") {
  // with the coordinate frequency the toy amplitude is constant in r*
  const auto c = wavenumber_convention_check({0.5, 3.0}, 1.0);
  CHECK(c.spread_omega < 1e-10);
  CHECK(c.spread_omega_local > 1e-2);
}

TEST_CASE("validation suites") {
  const auto results = run_validation_suites(shell, SolverOptions{});
  CHECK(results.size() >= 7);
  for (const auto &r : results) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.passed);
    CHECK(r.measured <= r.threshold);
  }
}
