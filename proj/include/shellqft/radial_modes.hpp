#pragma once

#include "shellqft/geometry.hpp"
#include "shellqft/ode.hpp"

#include <functional>
#include <span>
#include <vector>

namespace shellqft {

/*!
  How the tortoise derivative of rho = r psi jumps across the shell.

  AsPublished:     [d rho/dr*] = (f(R) - sqrt f(R)) rho(R)
  FluxConserving:  [d rho/dr*] = (f(R) - sqrt f(R)) rho(R) / R

  The second follows from continuity of d psi/dr* with rho = r psi. The first
  is the default.
*/
enum class JumpConvention { AsPublished, FluxConserving };

struct SolverOptions {
  ode::StepControl step{};
  //! r_max: smallest r with V_l(r)/omega^2 below this.
  double potential_tol = 1e-8;
  //! ... and at least this many 1/omega beyond the shell.
  double min_extent = 20.0;
  int min_steps_per_wavelength = 50;
  //! Samples per asymptotic wavelength used by the amplitude fit.
  int extraction_samples = 64;
  //! Relative spread of the amplitude above which extraction fails.
  double spread_tol = 1e-6;
  //! Divide out the local wavenumber sqrt(omega^2 - V) in the amplitude fit.
  //! With false, the bare sqrt(rho^2 + (d rho/omega)^2) is averaged.
  bool wkb_extraction = true;
  //! Flat space: A = 2 omega exactly, skipping the ODE.
  bool analytic_flat = true;
  //! Matching radius for the numerical flat-space path.
  double flat_matching_radius = 1.0;
  //! Scale applied to the interior seed j_l (A must not depend on it).
  double seed_scale = 1.0;
  JumpConvention jump = JumpConvention::AsPublished;
  bool record_profile = false;
  //! Keep every n-th accepted exterior step in the profile.
  std::size_t profile_stride = 1;
};

/*!
  @brief Everything the mode matcher needs about a background: the interior
  lapse, where and how hard the jump is, and the exterior radial operator.

  Built from a SpacetimeModel, or as the jump-only model whose exterior is free
  propagation (V = 0, r* = r + const) with the shell jump retained.
*/
class MatchingGeometry {
public:
  enum class Exterior { Schwarzschild, Free };

  static MatchingGeometry from_spacetime(const SpacetimeModel &s,
                                         const SolverOptions &opt = {});
  static MatchingGeometry jump_only(double M, double R,
                                    JumpConvention jump =
                                        JumpConvention::AsPublished);

  double matching_radius() const { return m_R; }
  double interior_lapse() const { return m_lapse; }
  double jump_coefficient() const { return m_jump; }
  double mass() const { return m_M; }
  Exterior exterior() const { return m_exterior; }
  bool is_flat() const { return m_M == 0.0 && m_jump == 0.0 && m_lapse == 1.0; }

  //! d r/d r* outside the shell.
  double rstar_factor(double r) const;
  //! Exterior potential V_l(r), r >= R.
  double potential(int l, double r) const;
  //! Tortoise coordinate, r* = 0 at the centre, continuous at R.
  double tortoise(double r) const;

private:
  double m_M = 0.0;
  double m_R = 1.0;
  double m_lapse = 1.0;
  double m_jump = 0.0;
  Exterior m_exterior = Exterior::Schwarzschild;
};

//! psi~ = j_l(omega~ r) and its tortoise derivative inside the shell.
struct InteriorValue {
  double psi;
  double dpsi_drstar;
};
InteriorValue interior_solution(const SpacetimeModel &s, double omega_local,
                                int l, double r);

//! Coefficient k in [d rho/dr*] = k rho(R). Zero for flat space.
double shell_jump_coefficient(const SpacetimeModel &s,
                              JumpConvention jump = JumpConvention::AsPublished);

//! d rho/dr* just outside the shell from the interior limit.
double apply_shell_jump(const SpacetimeModel &s, double rho_at_R,
                        double drho_inside,
                        JumpConvention jump = JumpConvention::AsPublished);

//! (r, rho, d rho/dr*)
struct RadialState {
  double r = 0.0;
  double rho = 0.0;
  double drho = 0.0;
};

//! (r*, r, rho, d rho/dr*) for integration in the tortoise coordinate.
struct TortoiseState {
  double rstar = 0.0;
  double r = 0.0;
  double rho = 0.0;
  double drho = 0.0;
};

/*!
  @brief Integrates the exterior mode equation d^2 rho/dr*^2 + (w^2 - V) rho = 0.

  Uses r as the independent variable with d/dr* = (dr/dr*) d/dr applied
  analytically, or r* itself when equispaced tortoise samples are needed
  (the ODE then carries r as a dependent variable, so r*(r) is never
  inverted).
*/
class ExteriorPropagator {
public:
  ExteriorPropagator(const MatchingGeometry &g, double omega, int l,
                     const SolverOptions &opt);

  //! Advance in r to r_to. `on_step`, if given, sees every accepted state.
  RadialState
  advance_r(RadialState s, double r_to,
            const std::function<void(const RadialState &)> &on_step = {});

  //! Advance in r* to rstar_to.
  TortoiseState advance_rstar(TortoiseState s, double rstar_to);

  const ode::Statistics &statistics() const;
  double omega() const { return m_omega; }
  int l() const { return m_l; }
  const MatchingGeometry &geometry() const { return m_geom; }

private:
  MatchingGeometry m_geom;
  double m_omega;
  int m_l;
  SolverOptions m_opt;
  ode::AdaptiveIntegrator<2> m_r_int;
  ode::AdaptiveIntegrator<3> m_rstar_int;
  double m_h_r = 0.0;
  double m_h_rstar = 0.0;
  ode::Statistics m_total;
};

//! Outer radius for the exterior integration at this frequency.
double exterior_extent(const MatchingGeometry &g, double omega, int l,
                       const SolverOptions &opt);

//! Integrate from the shell (init.r must equal R) out to r_max.
RadialState integrate_exterior(const MatchingGeometry &g, double omega, int l,
                               RadialState init, double r_max,
                               const SolverOptions &opt = {});
RadialState integrate_exterior(const SpacetimeModel &s, double omega, int l,
                               RadialState init, double r_max,
                               const SolverOptions &opt = {});

//! One sample of the asymptotic solution used by the amplitude fit.
struct AsymptoticSample {
  double rstar;
  double rho;
  double drho;
  //! Local wavenumber sqrt(omega^2 - V); set equal to omega for the bare fit.
  double wavenumber;
};

struct AmplitudeFit {
  double amplitude; //!< C in rho -> C sin(omega r* + theta)
  double phase;     //!< theta in [0, 2 pi)
  double spread;    //!< relative (max - min)/mean of the amplitude samples
};

/*!
  Fit rho -> C sin(omega r* + theta) from samples covering one asymptotic
  wavelength (uniform in r*, endpoint excluded). Throws NumericalError
  ("asymptotic region not reached") when spread > spread_tol.
*/
AmplitudeFit extract_amplitude(std::span<const AsymptoticSample> samples,
                               double omega, double spread_tol = 1e-6);

struct ProfileSample {
  double r;
  double rstar;
  double rho;  //!< normalised mode, rho -> 2 sin(omega r* + theta)
  double drho; //!< d rho/dr*; at r = R two samples carry the one-sided limits
};

/*!
  @brief One solved radial mode (omega~, l).

  `amplitude` is A, the factor taking the interior seed j_l(omega~ r) to the
  mode normalised as rho -> 2 sin(omega r* + theta). Flat space gives A = 2 omega~.
*/
struct RadialMode {
  double omega = 0.0;       //!< Killing frequency
  double omega_local = 0.0; //!< interior proper frequency, omega/sqrt(f(R))
  int l = 0;
  double amplitude = 0.0;
  double phase = 0.0;
  double amp_uncertainty = 0.0; //!< relative error estimate of A
  bool analytic = false;

  double seed_scale = 1.0;
  RadialState inside_shell;  //!< unnormalised seed at R^-
  RadialState outside_shell; //!< unnormalised, after the jump, at R^+
  //! Unnormalised state min(one wavelength, R) outside R (used to re-measure
  //! the jump by integrating back).
  RadialState near_shell;
  //! Unnormalised state at the end of the extraction window.
  TortoiseState asymptotic;
  double r_max = 0.0;
  ode::Statistics steps;
  std::vector<ProfileSample> profile;
};

RadialMode solve_mode(const MatchingGeometry &g, double omega_local, int l,
                      const SolverOptions &opt = {});
RadialMode solve_mode(const SpacetimeModel &s, double omega_local, int l,
                      const SolverOptions &opt = {});

/*!
  Re-measure the interface conditions of a solved mode: integrate the exterior
  solution from `near_shell` back to R^+ and compare it against the interior
  seed. Both residuals are relative to the local amplitude omega*|rho, drho/omega|.
*/
struct JumpResidual {
  double continuity; //!< |rho(R+) - rho(R-)|
  double jump;       //!< |[d rho/dr*] - k rho(R)|
  double expected_jump;
  double measured_jump;
};
JumpResidual measure_jump_residual(const MatchingGeometry &g,
                                   const RadialMode &mode,
                                   const SolverOptions &opt = {});

} // namespace shellqft
