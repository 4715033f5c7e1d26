#include "shellqft/radial_modes.hpp"
#include "shellqft/errors.hpp"
#include "shellqft/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace shellqft {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double jump_from(double f, double R, JumpConvention jump) {
  const double k = f - std::sqrt(f);
  return jump == JumpConvention::FluxConserving ? k / R : k;
}
} // namespace

//------------------------------------------------------------------------------
MatchingGeometry MatchingGeometry::from_spacetime(const SpacetimeModel &s,
                                                  const SolverOptions &opt) {
  MatchingGeometry g;
  g.m_exterior = Exterior::Schwarzschild;
  if (s.is_flat()) {
    if (!(opt.flat_matching_radius > 0.0))
      throw DomainError("flat matching radius must be positive");
    g.m_R = opt.flat_matching_radius;
    return g;
  }
  g.m_M = s.mass();
  g.m_R = *s.radius();
  g.m_lapse = s.interior_lapse();
  g.m_jump = shell_jump_coefficient(s, opt.jump);
  return g;
}

MatchingGeometry MatchingGeometry::jump_only(double M, double R,
                                             JumpConvention jump) {
  const auto s = SpacetimeModel::shell(M, R); // validates R > 2M
  MatchingGeometry g;
  g.m_exterior = Exterior::Free;
  g.m_M = M;
  g.m_R = R;
  g.m_lapse = s.interior_lapse();
  g.m_jump = shell_jump_coefficient(s, jump);
  return g;
}

double MatchingGeometry::rstar_factor(double r) const {
  if (m_exterior == Exterior::Free || m_M == 0.0)
    return 1.0;
  return 1.0 - 2.0 * m_M / r;
}

double MatchingGeometry::potential(int l, double r) const {
  if (m_exterior == Exterior::Free)
    return 0.0;
  const double ll = double(l) * double(l + 1);
  const double f = rstar_factor(r);
  return f * (ll / (r * r) + 2.0 * m_M / (r * r * r));
}

double MatchingGeometry::tortoise(double r) const {
  if (r < m_R)
    return r / m_lapse;
  const double at_shell = m_R / m_lapse;
  if (m_exterior == Exterior::Free || m_M == 0.0)
    return at_shell + (r - m_R);
  return at_shell + (r - m_R) +
         2.0 * m_M * std::log((r - 2.0 * m_M) / (m_R - 2.0 * m_M));
}

//------------------------------------------------------------------------------
InteriorValue interior_solution(const SpacetimeModel &s, double omega_local,
                                int l, double r) {
  if (!(omega_local > 0.0))
    throw DomainError("mode frequency must be positive");
  if (!(r >= 0.0) || (!s.is_flat() && r > *s.radius()))
    throw DomainError("interior solution needs 0 <= r <= R");
  const double x = omega_local * r;
  return {sph_bessel_j(l, x),
          s.interior_lapse() * omega_local * sph_bessel_j_prime(l, x)};
}

double shell_jump_coefficient(const SpacetimeModel &s, JumpConvention jump) {
  if (s.is_flat())
    return 0.0;
  return jump_from(s.f_at_shell(), *s.radius(), jump);
}

double apply_shell_jump(const SpacetimeModel &s, double rho_at_R,
                        double drho_inside, JumpConvention jump) {
  return drho_inside + shell_jump_coefficient(s, jump) * rho_at_R;
}

//------------------------------------------------------------------------------
ExteriorPropagator::ExteriorPropagator(const MatchingGeometry &g, double omega,
                                       int l, const SolverOptions &opt)
    : m_geom(g), m_omega(omega), m_l(l), m_opt(opt), m_r_int(opt.step),
      m_rstar_int(opt.step) {
  if (!(omega > 0.0))
    throw DomainError("exterior frequency must be positive");
  if (opt.min_steps_per_wavelength < 1)
    throw DomainError("min_steps_per_wavelength must be positive");
}

const ode::Statistics &ExteriorPropagator::statistics() const {
  return m_total;
}

RadialState ExteriorPropagator::advance_r(
    RadialState s, double r_to,
    const std::function<void(const RadialState &)> &on_step) {
  using State = ode::AdaptiveIntegrator<2>::State;
  const double w = m_omega;
  const double w2 = w * w;
  const int l = m_l;
  const auto &g = m_geom;
  const auto tol = m_opt.step;
  auto sys = [&](const State &y, State &dy, double r) {
    const double h = g.rstar_factor(r);
    dy[0] = y[1] / h;
    dy[1] = (g.potential(l, r) - w2) * y[0] / h;
  };
  auto norm = [&](const State &y, const State &e) {
    const double amp = std::hypot(y[0], y[1] / w);
    return std::max(std::abs(e[0]), std::abs(e[1]) / w) /
           (tol.atol + tol.rtol * amp);
  };
  const double per = two_pi / (w * double(m_opt.min_steps_per_wavelength));
  auto hmax = [&](double r, const State &) { return per * g.rstar_factor(r); };

  State y{s.rho, s.drho};
  double r = s.r;
  const auto before = m_r_int.statistics();
  if (on_step) {
    m_r_int.advance(sys, norm, hmax, y, r, r_to, m_h_r,
                    [&](double t, const State &v) {
                      on_step(RadialState{t, v[0], v[1]});
                    });
  } else {
    m_r_int.advance(sys, norm, hmax, y, r, r_to, m_h_r);
  }
  const auto after = m_r_int.statistics();
  m_total.accepted += after.accepted - before.accepted;
  m_total.rejected += after.rejected - before.rejected;
  return {r, y[0], y[1]};
}

TortoiseState ExteriorPropagator::advance_rstar(TortoiseState s,
                                                double rstar_to) {
  using State = ode::AdaptiveIntegrator<3>::State;
  const double w = m_omega;
  const double w2 = w * w;
  const int l = m_l;
  const auto &g = m_geom;
  const auto tol = m_opt.step;
  auto sys = [&](const State &y, State &dy, double) {
    dy[0] = g.rstar_factor(y[0]);
    dy[1] = y[2];
    dy[2] = (g.potential(l, y[0]) - w2) * y[1];
  };
  auto norm = [&](const State &y, const State &e) {
    const double amp = std::hypot(y[1], y[2] / w);
    const double wave = std::max(std::abs(e[1]), std::abs(e[2]) / w) /
                        (tol.atol + tol.rtol * amp);
    const double radial =
        std::abs(e[0]) / (tol.atol + tol.rtol * std::abs(y[0]));
    return std::max(wave, radial);
  };
  const double per = two_pi / (w * double(m_opt.min_steps_per_wavelength));
  auto hmax = [&](double, const State &) { return per; };

  State y{s.r, s.rho, s.drho};
  double t = s.rstar;
  const auto before = m_rstar_int.statistics();
  m_rstar_int.advance(sys, norm, hmax, y, t, rstar_to, m_h_rstar);
  const auto after = m_rstar_int.statistics();
  m_total.accepted += after.accepted - before.accepted;
  m_total.rejected += after.rejected - before.rejected;
  return {t, y[0], y[1], y[2]};
}

//------------------------------------------------------------------------------
double exterior_extent(const MatchingGeometry &g, double omega, int l,
                       const SolverOptions &opt) {
  const double R = g.matching_radius();
  const double base = R + opt.min_extent / omega;
  const bool no_potential =
      g.exterior() == MatchingGeometry::Exterior::Free ||
      (g.mass() == 0.0 && l == 0);
  if (no_potential)
    return base;
  const double target = opt.potential_tol * omega * omega;
  // V_l is decreasing beyond r = 3M (the peak sits at or inside it)
  double lo = std::max(R, 3.0 * g.mass());
  if (g.potential(l, lo) < target)
    return std::max(base, lo);
  double hi = 2.0 * lo;
  while (g.potential(l, hi) >= target)
    hi *= 2.0;
  for (int it = 0; it < 80 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g.potential(l, mid) >= target ? lo : hi) = mid;
  }
  return std::max(base, hi);
}

RadialState integrate_exterior(const MatchingGeometry &g, double omega, int l,
                               RadialState init, double r_max,
                               const SolverOptions &opt) {
  if (!(r_max >= init.r))
    throw DomainError("r_max must lie outside the starting radius");
  ExteriorPropagator prop(g, omega, l, opt);
  return prop.advance_r(init, r_max);
}

RadialState integrate_exterior(const SpacetimeModel &s, double omega, int l,
                               RadialState init, double r_max,
                               const SolverOptions &opt) {
  return integrate_exterior(MatchingGeometry::from_spacetime(s, opt), omega, l,
                            init, r_max, opt);
}

//------------------------------------------------------------------------------
AmplitudeFit extract_amplitude(std::span<const AsymptoticSample> samples,
                               double omega, double spread_tol) {
  if (samples.empty())
    throw DomainError("amplitude fit needs samples");
  double sum = 0.0, lo = INFINITY, hi = -INFINITY;
  double cs = 0.0, sn = 0.0;
  for (const auto &p : samples) {
    const double k = p.wavenumber;
    const double c = std::sqrt(p.rho * p.rho * k / omega +
                               p.drho * p.drho / (k * omega));
    sum += c;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    // rho = C sin(phi), drho/omega = C cos(phi), phi = omega r* + theta
    const double theta = std::atan2(p.rho, p.drho / omega) - omega * p.rstar;
    cs += std::cos(theta);
    sn += std::sin(theta);
  }
  const double mean = sum / double(samples.size());
  const double spread = mean > 0.0 ? (hi - lo) / mean : INFINITY;
  if (!(spread <= spread_tol)) {
    std::ostringstream msg;
    msg << "asymptotic region not reached: amplitude spread " << spread
        << " exceeds " << spread_tol;
    throw NumericalError(msg.str());
  }
  double phase = std::atan2(sn, cs);
  if (phase < 0.0)
    phase += two_pi;
  return {mean, phase, spread};
}

//------------------------------------------------------------------------------
namespace {

RadialMode analytic_flat_mode(const MatchingGeometry &g, double omega_local,
                              int l, const SolverOptions &opt) {
  RadialMode m;
  m.omega = omega_local;
  m.omega_local = omega_local;
  m.l = l;
  m.amplitude = 2.0 * omega_local;
  m.analytic = true;
  m.seed_scale = opt.seed_scale;
  // x j_l(x) -> sin(x - l pi/2)
  m.phase = std::fmod(-0.5 * double(l) * std::numbers::pi + 4.0 * two_pi,
                      two_pi);
  const double R = g.matching_radius();
  auto seed_state = [&](double r) {
    const double x = omega_local * r;
    const double j = sph_bessel_j(l, x);
    const double jp = sph_bessel_j_prime(l, x);
    return RadialState{r, opt.seed_scale * r * j,
                       opt.seed_scale * (j + x * jp)};
  };
  m.inside_shell = seed_state(R);
  m.outside_shell = m.inside_shell;
  m.near_shell = m.inside_shell;
  m.r_max = exterior_extent(g, omega_local, l, opt);
  const auto a = seed_state(m.r_max);
  m.asymptotic = {m.r_max, a.r, a.rho, a.drho};
  return m;
}

} // namespace

RadialMode solve_mode(const MatchingGeometry &g, double omega_local, int l,
                      const SolverOptions &opt) {
  if (!(omega_local > 0.0) || !std::isfinite(omega_local))
    throw DomainError("mode frequency must be positive and finite");
  if (l < 0)
    throw DomainError("angular number must be nonnegative");
  if (g.exterior() == MatchingGeometry::Exterior::Free && l != 0)
    throw DomainError("the jump-only model is defined for l = 0 only");
  if (opt.extraction_samples < 8)
    throw DomainError("extraction needs at least 8 samples per wavelength");

  if (g.is_flat() && opt.analytic_flat &&
      g.exterior() == MatchingGeometry::Exterior::Schwarzschild)
    return analytic_flat_mode(g, omega_local, l, opt);

  RadialMode m;
  m.l = l;
  m.omega_local = omega_local;
  m.omega = omega_local * g.interior_lapse();
  m.seed_scale = opt.seed_scale;
  const double w = m.omega;
  const double R = g.matching_radius();
  const double lapse = g.interior_lapse();

  const double x = omega_local * R;
  const double j = sph_bessel_j(l, x);
  const double jp = sph_bessel_j_prime(l, x);
  // rho~ = r j_l(omega~ r), d/dr* = lapse d/dr inside
  m.inside_shell = {R, opt.seed_scale * R * j,
                    opt.seed_scale * lapse * (j + x * jp)};
  m.outside_shell = m.inside_shell;
  m.outside_shell.drho += g.jump_coefficient() * m.inside_shell.rho;

  ExteriorPropagator prop(g, w, l, opt);
  m.r_max = exterior_extent(g, w, l, opt);

  std::vector<RadialState> exterior_steps;
  // one wavelength out, but no further than R: at low frequency a wavelength
  // would make the back-integration a long-range test rather than a local one
  const double near_target =
      R + std::min({two_pi / w, R, 0.25 * (m.r_max - R)});
  bool have_near = false;
  std::size_t counter = 0;
  const auto end = prop.advance_r(
      m.outside_shell, m.r_max, [&](const RadialState &s) {
        if (!have_near && s.r >= near_target) {
          m.near_shell = s;
          have_near = true;
        }
        if (opt.record_profile && (counter++ % opt.profile_stride) == 0)
          exterior_steps.push_back(s);
      });
  if (!have_near)
    m.near_shell = end;

  // one wavelength of equispaced tortoise samples
  const int n = opt.extraction_samples;
  const double dstar = two_pi / (w * double(n));
  std::vector<AsymptoticSample> samples;
  std::vector<double> sample_r;
  samples.reserve(std::size_t(n));
  TortoiseState ts{g.tortoise(end.r), end.r, end.rho, end.drho};
  const double start = ts.rstar;
  for (int i = 0; i < n; ++i) {
    if (i > 0)
      ts = prop.advance_rstar(ts, start + double(i) * dstar);
    double k = w;
    if (opt.wkb_extraction) {
      const double v = g.potential(l, ts.r);
      k = std::sqrt(std::max(w * w - v, 0.25 * w * w));
    }
    samples.push_back({ts.rstar, ts.rho, ts.drho, k});
    sample_r.push_back(ts.r);
  }
  m.asymptotic = prop.advance_rstar(ts, start + double(n) * dstar);

  const auto fit = extract_amplitude(samples, w, opt.spread_tol);
  m.amplitude = 2.0 * opt.seed_scale / fit.amplitude;
  m.phase = fit.phase;
  m.steps = prop.statistics();
  m.amp_uncertainty =
      fit.spread + opt.step.rtol * std::sqrt(double(m.steps.accepted));

  if (opt.record_profile) {
    const double norm = m.amplitude / opt.seed_scale;
    constexpr int interior_points = 16;
    for (int i = 0; i <= interior_points; ++i) {
      const double r = R * double(i) / interior_points;
      const double xi = omega_local * r;
      const double ji = sph_bessel_j(l, xi);
      const double jpi = sph_bessel_j_prime(l, xi);
      m.profile.push_back({r, g.tortoise(r), norm * opt.seed_scale * r * ji,
                           norm * opt.seed_scale * lapse * (ji + xi * jpi)});
    }
    // the i = interior_points entry is R^-; add R^+
    m.profile.push_back({R, g.tortoise(R), norm * m.outside_shell.rho,
                         norm * m.outside_shell.drho});
    for (const auto &s : exterior_steps)
      m.profile.push_back(
          {s.r, g.tortoise(s.r), norm * s.rho, norm * s.drho});
    for (std::size_t i = 0; i < samples.size(); ++i)
      m.profile.push_back({sample_r[i], samples[i].rstar,
                           norm * samples[i].rho, norm * samples[i].drho});
  }
  return m;
}

RadialMode solve_mode(const SpacetimeModel &s, double omega_local, int l,
                      const SolverOptions &opt) {
  return solve_mode(MatchingGeometry::from_spacetime(s, opt), omega_local, l,
                    opt);
}

//------------------------------------------------------------------------------
JumpResidual measure_jump_residual(const MatchingGeometry &g,
                                   const RadialMode &mode,
                                   const SolverOptions &opt) {
  const auto &in = mode.inside_shell;
  const double w = mode.omega;
  const double scale = w * std::hypot(in.rho, in.drho / w);
  const double expected = g.jump_coefficient() * in.rho;
  if (mode.analytic)
    return {0.0, 0.0, expected, expected};
  ExteriorPropagator prop(g, w, mode.l, opt);
  const auto back = prop.advance_r(mode.near_shell, g.matching_radius());
  const double measured = back.drho - in.drho;
  return {std::abs(back.rho - in.rho) * w / scale,
          std::abs(measured - expected) / scale, expected, measured};
}

} // namespace shellqft
