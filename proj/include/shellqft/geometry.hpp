#pragma once

#include <optional>

namespace shellqft {

/*!
  @brief Static spherically symmetric background: flat space, or a thin
  massive shell of areal radius R and ADM mass M.

  Inside the shell the metric is Minkowski with a rescaled time coordinate,
  outside it is Schwarzschild:

      ds^2 = -f(R) dt^2 + dr^2 + r^2 dOmega^2            r < R
      ds^2 = -f(r) dt^2 + dr^2/f(r) + r^2 dOmega^2       r > R,   f = 1 - 2M/r

  Units are hbar = c = R_Sch = 1, so the canonical shell has M = 0.5. Flat space
  behaves as a shell with M = 0 everywhere downstream.
*/
class SpacetimeModel {
public:
  enum class Kind { Flat, Shell };

  static SpacetimeModel flat();
  //! Throws DomainError unless R > 2M, M >= 0.
  static SpacetimeModel shell(double M, double R);

  Kind kind() const { return m_kind; }
  bool is_flat() const { return m_kind == Kind::Flat; }
  double mass() const { return m_M; }
  //! Shell radius; absent for flat space.
  std::optional<double> radius() const;

  //! f(r) = 1 - 2M/r (1 for flat space or M = 0).
  double schwarzschild_f(double r) const;
  //! f(R), the interior lapse squared. 1 for flat space.
  double f_at_shell() const;
  //! sqrt(f(R)): ratio of coordinate to interior proper frequency.
  double interior_lapse() const;

private:
  SpacetimeModel(Kind kind, double M, double R) : m_kind(kind), m_M(M), m_R(R) {}
  Kind m_kind;
  double m_M;
  double m_R;
};

struct MetricFactors {
  double lapse;  //!< alpha
  double radial; //!< a
  double f;      //!< Schwarzschild factor at r (f(R) inside the shell)
};

//! alpha, a and f at radius r > 0. At r == R the exterior branch is used.
MetricFactors metric_factors(const SpacetimeModel &s, double r);

//! d r / d r*  (= alpha/a). Interior: sqrt(f(R)); exterior: f(r).
double rstar_derivative_factor(const SpacetimeModel &s, double r);

//! Tortoise radius with r* = 0 at the centre and r*(r) continuous at R.
double tortoise(const SpacetimeModel &s, double r);

//! Radial effective potential V_l(r) of the Schrodinger-form mode equation.
//! Discontinuous at R; r == R evaluates the exterior branch.
double effective_potential(const SpacetimeModel &s, int l, double r);

//! Surface energy density and pressure of the shell (Lanczos equations).
struct ShellMatter {
  double sigma_surface;
  double pressure;
};

//! Throws DomainError("no shell") for flat space.
ShellMatter shell_matter(const SpacetimeModel &s);

//------------------------------------------------------------------------------
enum class EnergyUnit { Natural, LocalHawking };

/*!
  @brief Energy unit conversion between natural units and k_B T_Hloc, the
  Hawking temperature of a black hole of the shell's mass, optionally
  blueshifted to the shell interior by 1/sqrt(f(R)).
*/
class UnitSystem {
public:
  UnitSystem() = default;
  //! Natural-only unit system (factor 1).
  static UnitSystem natural();
  //! k_B T_Hloc = 1/(8 pi M sqrt(f(R))), or 1/(8 pi M) without blueshift.
  //! Throws DomainError for flat space or M = 0.
  static UnitSystem local_hawking(const SpacetimeModel &s,
                                  bool blueshift = true);

  //! Value of one LocalHawking unit expressed in natural units.
  double hawking_energy() const { return m_kT; }
  bool has_hawking_scale() const { return m_kT > 0.0; }

  double to_natural(double x, EnergyUnit from) const;
  double from_natural(double x, EnergyUnit to) const;

private:
  explicit UnitSystem(double kT) : m_kT(kT) {}
  double m_kT = 0.0;
};

double convert_energy(const UnitSystem &u, double x, EnergyUnit from,
                      EnergyUnit to);

const char *to_string(EnergyUnit u);

} // namespace shellqft
