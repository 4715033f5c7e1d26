#pragma once

#include "shellqft/mode_mesh.hpp"
#include "shellqft/radial_modes.hpp"

#include <string>
#include <vector>

namespace shellqft {

//! Shell interior and jump, with the exterior replaced by free propagation.
struct ToyModelSpec {
  double M = 0.5;
  double R = 3.0;
};

MatchingGeometry toy_geometry(const ToyModelSpec &t,
                              JumpConvention jump = JumpConvention::AsPublished);

//! Closed-form A for the toy model, l = 0.
double toy_amplitude(const ToyModelSpec &t, double omega_local,
                     JumpConvention jump = JumpConvention::AsPublished);

/*!
  |int rho^2 dr* / (2L) - 1| for the normalised mode over a window of length
  L starting where the extraction window ended. L must span at least 20
  asymptotic wavelengths.
*/
double kg_norm_check(const MatchingGeometry &g, const RadialMode &mode,
                     double L, const SolverOptions &opt = {});

struct OrthogonalityResult {
  double overlap; //!< |int rho1 rho2 dr*| / (2L)
  double bound;   //!< 2 (2/L)(1/|w1 - w2| + 1/(w1 + w2))
  bool within() const { return overlap <= bound; }
};
OrthogonalityResult kg_orthogonality_check(const MatchingGeometry &g,
                                           const RadialMode &a,
                                           const RadialMode &b, double L,
                                           const SolverOptions &opt = {});

struct ResonanceResult {
  bool found = false;
  double period = 0.0;       //!< in omega~
  double significance = 0.0; //!< peak power over median power
};

/*!
  Dominant period of |A|^2 - 4 omega~^2 on the mesh: resampled uniformly,
  detrended by a quadratic fit, Hann-windowed and scanned by a zero-padded
  DFT. A peak below `min_significance` times the median power counts as
  absent.
*/
ResonanceResult resonance_period(const ModeMesh &mesh,
                                 double min_significance = 20.0);

//! Amplitude-fit spread of a toy mode when the exterior wavenumber in r* is
//! taken as omega (adopted) or as omega~ (rejected).
struct WavenumberCheck {
  double spread_omega;
  double spread_omega_local;
};
WavenumberCheck wavenumber_convention_check(const ToyModelSpec &t,
                                            double omega_local);

struct SuiteResult {
  std::string name;
  bool passed;
  double measured;
  double threshold;
  std::string detail;
};

//! The desk-scale validation suites behind `shellqft validate`.
std::vector<SuiteResult> run_validation_suites(const SpacetimeModel &s,
                                               const SolverOptions &opt);

} // namespace shellqft
