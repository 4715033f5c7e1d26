#include "doctest.h"
#include "shellqft/errors.hpp"
#include "shellqft/mode_mesh.hpp"

#include <cmath>
#include <numbers>

using namespace shellqft;
using doctest::Approx;

namespace {
const auto shell = SpacetimeModel::shell(0.5, 3.0);

MeshOptions small(double top) {
  MeshOptions o;
  o.omega_max = top;
  return o;
}
} // namespace

TEST_CASE("flat mesh is analytic") {
  const auto m = build_mode_mesh(SpacetimeModel::flat(), 0, small(30.0));
  CHECK(m.analytic);
  CHECK(m.refinement_error == 0.0);
  for (std::size_t i = 0; i < m.grid.size(); ++i)
    CHECK(m.amp_sq[i] == 4.0 * m.grid[i] * m.grid[i]);
  for (double w : {0.0011, 0.5, 7.77, 29.9})
    CHECK(m.weight_at(w) == 1.0);
  CHECK(m.omega_min() <= 1e-3);
  CHECK(m.omega_max() >= 30.0);
}

TEST_CASE("shell mesh meets its refinement target at the midpoints") {
  const auto o = small(6.0);
  const auto m = build_mode_mesh(shell, 0, o);
  CHECK_FALSE(m.analytic);
  CHECK(m.refinement_error <= o.refinement_target);
  for (std::size_t i = 0; i + 1 < m.grid.size(); ++i)
    REQUIRE(m.grid[i + 1] > m.grid[i]);
  // at least 8 points per pi/R
  double widest = 0.0;
  for (std::size_t i = 0; i + 1 < m.grid.size(); ++i)
    widest = std::max(widest, m.grid[i + 1] - m.grid[i]);
  CHECK(widest <= std::numbers::pi / 3.0 / 8.0 + 1e-12);

  // fresh off-grid points against direct solves
  double worst = 0.0;
  for (std::size_t i = 3; i + 1 < m.grid.size(); i += 7) {
    const double w = m.grid[i] + 0.37 * (m.grid[i + 1] - m.grid[i]);
    const double direct = direct_weight(shell, 0, w, o);
    worst = std::max(worst, std::abs(m.weight_at(w) / direct - 1.0));
  }
  CHECK(worst <= 1e-5);

  // weight reads |A|^2 / 4 w~^2
  const std::size_t k = m.grid.size() / 2;
  CHECK(m.weight[k] ==
        Approx(m.amp_sq[k] / (4.0 * m.grid[k] * m.grid[k])).epsilon(1e-14));
}

TEST_CASE("halving the spacing cuts the interpolation error at least fourfold") {
  auto mid_error = [](int ppp) {
    MeshOptions o = small(8.0);
    o.points_per_period = ppp;
    o.low_end_ratio = 1.0; // purely uniform grid
    o.omega_min = 0.5;
    o.check_refinement = false;
    const auto m = build_mode_mesh(shell, 0, o);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < m.grid.size(); ++i) {
      const double w = 0.5 * (m.grid[i] + m.grid[i + 1]);
      worst = std::max(worst,
                       std::abs(m.weight_at(w) / direct_weight(shell, 0, w, o) -
                                1.0));
    }
    return worst;
  };
  const double coarse = mid_error(8), fine = mid_error(16);
  CHECK(fine * 4.0 <= coarse);
}

TEST_CASE("unmet refinement target reports the achieved error") {
  MeshOptions o = small(6.0);
  o.refinement_target = 1e-13;
  o.max_doublings = 0;
  CHECK_THROWS_WITH_AS(build_mode_mesh(shell, 0, o),
                       doctest::Contains("interpolation error"), NumericalError);
}

TEST_CASE("mesh domain checks") {
  MeshOptions o = small(4.0);
  o.points_per_period = 4;
  CHECK_THROWS_AS(build_mode_mesh(shell, 0, o), DomainError);
  o = small(4.0);
  CHECK_THROWS_AS(build_mode_mesh(shell, 1, o), DomainError); // centre, l > 0
  o.r_det = 3.5;
  CHECK_THROWS_AS(build_mode_mesh(shell, 0, o), DomainError);
}

TEST_CASE("radius meshes tabulate the mode at the detector") {
  MeshOptions o = small(4.0);
  o.r_det = 1.5;
  const auto m = build_mode_mesh(shell, 2, o);
  REQUIRE(m.mode_at_r.size() == m.grid.size());
  const std::size_t k = m.grid.size() / 3;
  const double w = m.grid[k];
  const double j = std::sph_bessel(2u, w * 1.5);
  CHECK(m.weight[k] == Approx(m.amp_sq[k] * j * j / (4 * w * w)).epsilon(1e-12));
  CHECK(m.mode_at_r[k] == Approx(m.amp_sq[k] * 2.25 * j * j).epsilon(1e-12));
}

TEST_CASE("thread count does not change the mesh") {
  MeshOptions a = small(3.0), b = small(3.0);
  b.threads = 3;
  const auto x = build_mode_mesh(shell, 0, a), y = build_mode_mesh(shell, 0, b);
  CHECK(x.grid == y.grid);
  CHECK(x.amp_sq == y.amp_sq);
}
