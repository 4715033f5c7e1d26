#include "shellqft/geometry.hpp"
#include "shellqft/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace shellqft {

SpacetimeModel SpacetimeModel::flat() { return {Kind::Flat, 0.0, 0.0}; }

SpacetimeModel SpacetimeModel::shell(double M, double R) {
  if (!(M >= 0.0) || !std::isfinite(M))
    throw DomainError("shell mass must be finite and nonnegative, got M=" +
                      std::to_string(M));
  if (!(R > 2.0 * M) || !std::isfinite(R) || !(R > 0.0))
    throw DomainError("shell radius must satisfy R > 2M, got M=" +
                      std::to_string(M) + " R=" + std::to_string(R));
  return {Kind::Shell, M, R};
}

std::optional<double> SpacetimeModel::radius() const {
  if (is_flat())
    return std::nullopt;
  return m_R;
}

double SpacetimeModel::schwarzschild_f(double r) const {
  if (m_M == 0.0)
    return 1.0;
  return 1.0 - 2.0 * m_M / r;
}

double SpacetimeModel::f_at_shell() const {
  return is_flat() ? 1.0 : schwarzschild_f(m_R);
}

double SpacetimeModel::interior_lapse() const {
  return std::sqrt(f_at_shell());
}

namespace {
void require_positive_radius(double r) {
  if (!(r > 0.0))
    throw DomainError("radius must be positive, got r=" + std::to_string(r));
}
bool inside(const SpacetimeModel &s, double r) {
  return !s.is_flat() && r < *s.radius();
}
} // namespace

MetricFactors metric_factors(const SpacetimeModel &s, double r) {
  require_positive_radius(r);
  if (s.is_flat())
    return {1.0, 1.0, 1.0};
  if (inside(s, r)) {
    const double fR = s.f_at_shell();
    return {std::sqrt(fR), 1.0, fR};
  }
  const double f = s.schwarzschild_f(r);
  const double sf = std::sqrt(f);
  return {sf, 1.0 / sf, f};
}

double rstar_derivative_factor(const SpacetimeModel &s, double r) {
  if (s.is_flat())
    return 1.0;
  if (inside(s, r))
    return s.interior_lapse();
  return s.schwarzschild_f(r);
}

double tortoise(const SpacetimeModel &s, double r) {
  if (r == 0.0)
    return 0.0;
  require_positive_radius(r);
  if (s.is_flat())
    return r;
  const double M = s.mass();
  const double R = *s.radius();
  if (r < R)
    return r / s.interior_lapse();
  const double at_shell = R / s.interior_lapse();
  if (M == 0.0)
    return at_shell + (r - R);
  // r + 2M ln(r/2M - 1) + C with C fixed by continuity at R
  return at_shell + (r - R) +
         2.0 * M * std::log((r - 2.0 * M) / (R - 2.0 * M));
}

double effective_potential(const SpacetimeModel &s, int l, double r) {
  require_positive_radius(r);
  if (l < 0)
    throw DomainError("angular number must be nonnegative");
  const double ll = double(l) * double(l + 1);
  if (inside(s, r))
    return s.f_at_shell() * ll / (r * r);
  const double M = s.mass();
  const double f = s.schwarzschild_f(r);
  return f * (ll / (r * r) + 2.0 * M / (r * r * r));
}

ShellMatter shell_matter(const SpacetimeModel &s) {
  if (s.is_flat())
    throw DomainError("no shell: surface quantities need a shell spacetime");
  const double M = s.mass();
  const double R = *s.radius();
  const double root = std::sqrt(1.0 - 2.0 * M / R);
  const double pi = std::numbers::pi;
  // 1 - sqrt(1-x) and 1 - x/2 - sqrt(1-x) written without cancellation
  const double x = 2.0 * M / R;
  const double one_minus_root = x / (1.0 + root);
  const double p_num = one_minus_root * one_minus_root / 2.0;
  return {one_minus_root / (4.0 * pi * R), p_num / (8.0 * pi * R * root)};
}

//------------------------------------------------------------------------------
UnitSystem UnitSystem::natural() { return UnitSystem{}; }

UnitSystem UnitSystem::local_hawking(const SpacetimeModel &s, bool blueshift) {
  if (s.is_flat() || s.mass() <= 0.0)
    throw DomainError(
        "local Hawking energy needs a shell with positive mass");
  double kT = 1.0 / (8.0 * std::numbers::pi * s.mass());
  if (blueshift)
    kT /= s.interior_lapse();
  return UnitSystem{kT};
}

double UnitSystem::to_natural(double x, EnergyUnit from) const {
  if (from == EnergyUnit::Natural)
    return x;
  if (!has_hawking_scale())
    throw DomainError("no local Hawking scale defined for this unit system");
  return x * m_kT;
}

double UnitSystem::from_natural(double x, EnergyUnit to) const {
  if (to == EnergyUnit::Natural)
    return x;
  if (!has_hawking_scale())
    throw DomainError("no local Hawking scale defined for this unit system");
  return x / m_kT;
}

double convert_energy(const UnitSystem &u, double x, EnergyUnit from,
                      EnergyUnit to) {
  if (from == to)
    return x;
  return u.from_natural(u.to_natural(x, from), to);
}

const char *to_string(EnergyUnit u) {
  return u == EnergyUnit::Natural ? "natural" : "local_hawking";
}

} // namespace shellqft
