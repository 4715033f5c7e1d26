#pragma once

#include "shellqft/geometry.hpp"
#include "shellqft/mode_mesh.hpp"
#include "shellqft/quadrature.hpp"
#include "shellqft/switching.hpp"

#include <string>
#include <vector>

namespace shellqft {

struct ResponseOptions {
  quad::Tolerance quadrature{1e-10, 0.0, 400'000};
};

struct ResponsePoint {
  double value = 0.0;
  //! quadrature estimate plus the bound on the omega~ < omega_min piece
  double error = 0.0;
  //! contribution of [0, omega_min]
  double below_cutoff = 0.0;
};

/*!
  Response of a detector at the centre,

      F(Omega) = int_0^inf d omega~ |chi^(Omega + omega~)|^2 |A|^2 / (8 pi omega~)
               = int_0^inf d omega~ (omega~ / 2 pi) w(omega~) |chi^(Omega + omega~)|^2

  with w from the l = 0 centre mesh. Below the mesh the weight is frozen at
  w(omega_min); the change of w across the first mesh interval bounds that
  piece's error. Throws DomainError when the mesh does not reach
  max(0, -Omega) + tail_extent.
*/
ResponsePoint response_center(const ModeMesh &mesh, const SwitchingSpec &sw,
                              double gap, const ResponseOptions &opt = {});

//! Upper frequency every mesh must reach for these gaps.
double required_omega_max(const SwitchingSpec &sw,
                          const std::vector<double> &gaps);

//! Closed-form flat response for Gaussian switching.
double flat_response_gaussian(double sigma, double gap);

/*!
  Response of a detector at radius r_det (inside the shell),

      F = sum_l (2l + 1) int d omega~ (omega~ / 2 pi) w_l(omega~) |chi^|^2

  with w_l the radius meshes (index = l). The sum stops once a term is below
  1e-10 of the running sum and l >= omega~_max r_det + 10. Throws
  NumericalError when the meshes run out first.
*/
struct RadiusResponse {
  ResponsePoint point;
  int l_used = 0;
  //! last included term relative to the sum
  double truncation = 0.0;
};
RadiusResponse response_at_radius(const std::vector<ModeMesh> &meshes,
                                  const SwitchingSpec &sw, double gap,
                                  const ResponseOptions &opt = {});

//! l needed by response_at_radius for these gaps (Bessel turning point + 10).
int required_l_max(const SwitchingSpec &sw, const std::vector<double> &gaps,
                   double r_det);

struct ResponseCurve {
  std::vector<double> gaps; //!< natural units
  std::vector<double> values;
  std::vector<double> quadrature_error;
  std::string config_fingerprint;
};

ResponseCurve evaluate_curve(const ModeMesh &mesh, const SwitchingSpec &sw,
                             const std::vector<double> &gaps,
                             const ResponseOptions &opt = {},
                             unsigned threads = 1);

struct GapSweep {
  ResponseCurve shell;
  ResponseCurve flat;
  std::vector<double> abs_diff;
  std::vector<double> rel_diff;
  ModeMesh shell_mesh;
};

/*!
  Shell and flat responses at the same gaps (natural units), the flat side on
  the analytic mesh. When `mesh.omega_max` is below what the gaps need it is
  raised to required_omega_max.
*/
GapSweep gap_sweep(const SpacetimeModel &s, const SwitchingSpec &sw,
                   const std::vector<double> &gaps, MeshOptions mesh,
                   const ResponseOptions &opt = {});
//! Same, reusing an existing shell mesh.
GapSweep gap_sweep(const ModeMesh &shell_mesh, const SwitchingSpec &sw,
                   const std::vector<double> &gaps,
                   const ResponseOptions &opt = {}, unsigned threads = 1);

struct RadiusSweepRow {
  double R;
  double F_shell;
  double F_flat;
  double abs_diff;
  double error;
};
struct RadiusSweep {
  std::vector<RadiusSweepRow> rows;
  std::vector<std::string> warnings;
};

//! Centre response for a shell of mass M at each radius, one mesh per radius.
RadiusSweep radius_sweep(double M, const std::vector<double> &radii,
                         const SwitchingSpec &sw, double gap,
                         MeshOptions mesh, const ResponseOptions &opt = {});

} // namespace shellqft
