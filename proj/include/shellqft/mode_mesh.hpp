#pragma once

#include "shellqft/geometry.hpp"
#include "shellqft/radial_modes.hpp"
#include "shellqft/spline.hpp"

#include <vector>

namespace shellqft {

struct MeshOptions {
  double omega_min = 1e-3;
  double omega_max = 30.0;
  //! Grid points per resonance period pi/R in omega~ (at least 8).
  int points_per_period = 16;
  //! Relative spacing of the geometric grid near omega_min, used until it
  //! reaches the uniform spacing.
  double low_end_ratio = 0.03;
  //! Spacing of the analytic flat mesh.
  double flat_spacing = 0.1;
  //! Target for the midpoint interpolation check (relative).
  double refinement_target = 1e-5;
  //! Grid doublings allowed to meet the target.
  int max_doublings = 3;
  bool check_refinement = true;
  //! Detector radius; 0 tabulates the centre weight.
  double r_det = 0.0;
  SolverOptions solver;
  unsigned threads = 1;
};

/*!
  @brief Tabulated |A_{omega~ l}|^2 over a grid in omega~ with the response
  weight
      centre (r_det = 0, l = 0):  w = |A|^2 / (4 omega~^2)
      radius r_det < R:           w = |A|^2 j_l(omega~ r_det)^2 / (4 omega~^2)
  so that w = 1 (centre) or j_l^2 (radius) in flat space. The cubic
  interpolant always carries the smooth factor |A|^2 / (4 omega~^2); the
  Bessel factor is applied exactly on evaluation.
*/
struct ModeMesh {
  int l = 0;
  double r_det = 0.0;
  bool analytic = false;
  //! Shell radius the mesh was built for; 0 for flat space.
  double shell_radius = 0.0;
  double mass = 0.0;

  std::vector<double> grid;
  std::vector<double> amp_sq;
  std::vector<double> amp_err;
  //! |rho(r_det)|^2 = |A|^2 r_det^2 j_l(omega~ r_det)^2 when r_det > 0.
  std::vector<double> mode_at_r;
  std::vector<double> weight;
  //! Largest relative midpoint deviation of the interpolant (0 when analytic).
  double refinement_error = 0.0;
  CubicSpline interpolant;

  double omega_min() const { return grid.front(); }
  double omega_max() const { return grid.back(); }
  //! Interpolated response weight w(omega~), omega~ within the grid.
  double weight_at(double omega_local) const;
  //! Interpolated |A|^2.
  double amp_sq_at(double omega_local) const;
  //! Rebuild `interpolant` from grid and amp_sq.
  void rebuild_interpolant();
};

//! Grid spacing used for a shell of radius R.
double mesh_spacing(double R, int points_per_period);

/*!
  Build the mesh for one l. Flat space with `solver.analytic_flat` gives the
  exact table. Otherwise modes are solved on a uniform grid and the
  interpolant is checked against direct solves at the midpoints; the grid is
  doubled (at most max_doublings times) until the deviation is below
  refinement_target, else NumericalError reports the achieved value.
*/
ModeMesh build_mode_mesh(const SpacetimeModel &s, int l,
                         const MeshOptions &opt);

//! Direct response weight at one frequency (the oracle behind the mesh).
double direct_weight(const SpacetimeModel &s, int l, double omega_local,
                     const MeshOptions &opt, double *amp_sq = nullptr,
                     double *amp_err = nullptr);

} // namespace shellqft
