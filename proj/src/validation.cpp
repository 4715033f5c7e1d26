#include "shellqft/validation.hpp"
#include "shellqft/errors.hpp"
#include "shellqft/response.hpp"
#include "shellqft/special_functions.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

namespace shellqft {

namespace {
constexpr double pi = std::numbers::pi;

// normalised rho of a solved mode at increasing r* beyond its extraction window
class ModeSampler {
public:
  ModeSampler(const MatchingGeometry &g, const RadialMode &m,
              const SolverOptions &opt)
      : m_mode(m), m_prop(g, m.omega, m.l, opt), m_state(m.asymptotic),
        m_norm(m.amplitude / m.seed_scale) {}

  double start() const { return m_mode.asymptotic.rstar; }

  double operator()(double rstar) {
    if (m_mode.analytic) {
      // flat: r* = r
      return m_mode.amplitude * rstar *
             sph_bessel_j(m_mode.l, m_mode.omega_local * rstar);
    }
    m_state = m_prop.advance_rstar(m_state, rstar);
    return m_norm * m_state.rho;
  }

  double potential_ratio(const MatchingGeometry &g) const {
    return g.potential(m_mode.l, m_mode.asymptotic.r) /
           (m_mode.omega * m_mode.omega);
  }

private:
  const RadialMode &m_mode;
  ExteriorPropagator m_prop;
  TortoiseState m_state;
  double m_norm;
};

using GL10 = boost::math::quadrature::gauss<double, 10>;

// int_{a}^{a+L} f(r*) dr* with `chunks` Gauss-Legendre panels, nodes visited
// in increasing order
template <class F> double window_integral(F &&f, double a, double L,
                                          std::size_t chunks) {
  const auto &x = GL10::abscissa();
  const auto &w = GL10::weights();
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t k = 0; k < x.size(); ++k) {
    nodes.push_back({-x[k], w[k]});
    if (x[k] != 0.0)
      nodes.push_back({x[k], w[k]});
  }
  std::sort(nodes.begin(), nodes.end());
  const double h = L / double(chunks);
  double sum = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const double mid = a + (double(c) + 0.5) * h;
    for (const auto &[t, wt] : nodes)
      sum += 0.5 * h * wt * f(mid + 0.5 * h * t);
  }
  return sum;
}

void check_window(double L, double omega, double ratio) {
  if (!(L >= 20.0 * 2.0 * pi / omega))
    throw DomainError("window must span at least 20 asymptotic wavelengths");
  if (ratio > 1e-6)
    throw DomainError("window starts inside the potential region");
}
} // namespace

MatchingGeometry toy_geometry(const ToyModelSpec &t, JumpConvention jump) {
  if (t.M == 0.0) {
    SolverOptions o;
    o.flat_matching_radius = t.R;
    auto g = MatchingGeometry::from_spacetime(SpacetimeModel::flat(), o);
    return g;
  }
  return MatchingGeometry::jump_only(t.M, t.R, jump);
}

double toy_amplitude(const ToyModelSpec &t, double w, JumpConvention jump) {
  if (!(w > 0.0))
    throw DomainError("mode frequency must be positive");
  const double f = 1.0 - 2.0 * t.M / t.R;
  if (!(f > 0.0))
    throw DomainError("toy model needs R > 2M");
  const double sf = std::sqrt(f);
  const double omega = w * sf;
  double k = f - sf;
  if (jump == JumpConvention::FluxConserving)
    k /= t.R;
  const double rho = std::sin(w * t.R) / w;
  const double drho = sf * std::cos(w * t.R) + k * rho;
  return 2.0 / std::hypot(rho, drho / omega);
}

double kg_norm_check(const MatchingGeometry &g, const RadialMode &mode,
                     double L, const SolverOptions &opt) {
  ModeSampler rho(g, mode, opt);
  check_window(L, mode.omega, rho.potential_ratio(g));
  const std::size_t chunks =
      std::size_t(std::ceil(L / (pi / mode.omega) - 1e-9));
  const double I = window_integral(
      [&](double x) {
        const double v = rho(x);
        return v * v;
      },
      rho.start(), L, std::max<std::size_t>(chunks, 1));
  return std::abs(I / (2.0 * L) - 1.0);
}

OrthogonalityResult kg_orthogonality_check(const MatchingGeometry &g,
                                           const RadialMode &a,
                                           const RadialMode &b, double L,
                                           const SolverOptions &opt) {
  if (a.l != b.l)
    throw DomainError("orthogonality check compares modes of equal l");
  ModeSampler ra(g, a, opt), rb(g, b, opt);
  const double wmin = std::min(a.omega, b.omega);
  const double wmax = std::max(a.omega, b.omega);
  check_window(L, wmin, std::max(ra.potential_ratio(g), rb.potential_ratio(g)));
  const double start = std::max(ra.start(), rb.start());
  const std::size_t chunks = std::size_t(std::ceil(L / (pi / wmax)));
  const double I = window_integral([&](double x) { return ra(x) * rb(x); },
                                   start, L, chunks);
  OrthogonalityResult out;
  out.overlap = std::abs(I) / (2.0 * L);
  if (a.omega == b.omega)
    out.bound = 1.0;
  else
    out.bound = 2.0 * (2.0 / L) *
                (1.0 / std::abs(a.omega - b.omega) + 1.0 / (a.omega + b.omega));
  return out;
}

ResonanceResult resonance_period(const ModeMesh &mesh,
                                 double min_significance) {
  constexpr std::size_t n = 2048;
  const double a = mesh.omega_min(), b = mesh.omega_max();
  std::vector<double> x(n), y(n);
  double peak_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a + (b - a) * double(i) / double(n - 1);
    y[i] = mesh.amp_sq_at(x[i]) - 4.0 * x[i] * x[i];
    peak_abs = std::max(peak_abs, std::abs(y[i]));
  }
  ResonanceResult out;
  if (peak_abs <= 1e-12 * 4.0 * b * b)
    return out;

  // least-squares quadratic in t = (x - mid)/half
  {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double S[5] = {0, 0, 0, 0, 0}, T[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (x[i] - mid) / half;
      double p = 1.0;
      for (int k = 0; k < 5; ++k) {
        S[k] += p;
        if (k < 3)
          T[k] += p * y[i];
        p *= t;
      }
    }
    // 3x3 normal equations by Cramer's rule
    const double m[3][3] = {{S[0], S[1], S[2]}, {S[1], S[2], S[3]},
                            {S[2], S[3], S[4]}};
    auto det3 = [](const double q[3][3]) {
      return q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) -
             q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
             q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
    };
    const double D = det3(m);
    double c[3];
    for (int k = 0; k < 3; ++k) {
      double q[3][3];
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s)
          q[r][s] = s == k ? T[r] : m[r][s];
      c[k] = det3(q) / D;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (x[i] - mid) / half;
      y[i] -= c[0] + c[1] * t + c[2] * t * t;
      y[i] *= 0.5 * (1.0 - std::cos(2.0 * pi * double(i) / double(n - 1)));
    }
  }

  // zero-padded DFT over frequencies nu (cycles per unit omega~)
  const double span = b - a;
  const double dx = span / double(n - 1);
  constexpr int pad = 8;
  const std::size_t bins = n * pad / 2;
  std::vector<double> power(bins, 0.0);
  for (std::size_t k = 1; k < bins; ++k) {
    const double nu = double(k) / (double(n * pad) * dx);
    std::complex<double> s = 0.0;
    const std::complex<double> step = std::polar(1.0, -2.0 * pi * nu * dx);
    std::complex<double> ph = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += y[i] * ph;
      ph *= step;
    }
    power[k] = std::norm(s);
  }
  // ignore periods longer than a quarter of the span
  const std::size_t first = std::size_t(std::ceil(4.0 * pad)) + 1;
  std::size_t best = first;
  for (std::size_t k = first; k < bins; ++k)
    if (power[k] > power[best])
      best = k;
  std::vector<double> sorted(power.begin() + first, power.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  out.significance = median > 0.0 ? power[best] / median : INFINITY;
  // parabolic refinement of the peak bin
  double kk = double(best);
  if (best + 1 < bins) {
    const double l0 = power[best - 1], l1 = power[best], l2 = power[best + 1];
    const double den = l0 - 2.0 * l1 + l2;
    if (den < 0.0)
      kk += 0.5 * (l0 - l2) / den;
  }
  out.period = double(n * pad) * dx / kk;
  out.found = out.significance >= min_significance;
  return out;
}

WavenumberCheck wavenumber_convention_check(const ToyModelSpec &t,
                                            double w) {
  const auto g = toy_geometry(t);
  SolverOptions opt;
  const auto m = solve_mode(g, w, 0, opt);
  const double omega = m.omega;
  // exact free evolution from the asymptotic state, in r*
  auto spread_with = [&](double k) {
    constexpr int n = 64;
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = 2.0 * pi / k * double(i) / n;
      const double rho = m.asymptotic.rho * std::cos(omega * d) +
                         m.asymptotic.drho / omega * std::sin(omega * d);
      const double drho = -m.asymptotic.rho * omega * std::sin(omega * d) +
                          m.asymptotic.drho * std::cos(omega * d);
      const double c = std::hypot(rho, drho / k);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      sum += c;
    }
    return (hi - lo) / (sum / n);
  };
  return {spread_with(omega), spread_with(w)};
}

//------------------------------------------------------------------------------
std::vector<SuiteResult> run_validation_suites(const SpacetimeModel &s,
                                               const SolverOptions &base) {
  std::vector<SuiteResult> out;
  auto fmt = [](double v) {
    std::ostringstream o;
    o.precision(3);
    o << std::scientific << v;
    return o.str();
  };

  SolverOptions numeric = base;
  numeric.analytic_flat = false;

  { // flat amplitude through the numerical path
    double worst = 0.0;
    for (int l = 0; l <= 2; ++l)
      for (double w : {0.05, 0.5, 2.0, 20.0}) {
        const auto m = solve_mode(SpacetimeModel::flat(), w, l, numeric);
        worst = std::max(worst, std::abs(m.amplitude - 2.0 * w) / (2.0 * w));
      }
    out.push_back({"flat_amplitude", worst < 1e-6, worst, 1e-6,
                   "max |A - 2w~|/2w~, l in {0,1,2}"});
  }
  const double M = s.is_flat() ? 0.0 : s.mass();
  const double R = s.is_flat() ? 3.0 : *s.radius();
  const ToyModelSpec toy{M, R};
  { // toy closed form
    const auto g = toy_geometry(toy, base.jump);
    double worst = 0.0;
    for (double w = 0.1; w <= 20.0; w *= 1.5) {
      const auto m = solve_mode(g, w, 0, numeric);
      const double A = toy_amplitude(toy, w, base.jump);
      worst = std::max(worst, std::abs(m.amplitude - A) / A);
    }
    out.push_back({"toy_oracle", worst < 1e-8, worst, 1e-8,
                   "jump-only model vs closed form"});
  }
  { // flat response closed form
    MeshOptions mo;
    mo.omega_max = 70.0;
    const auto mesh = build_mode_mesh(SpacetimeModel::flat(), 0, mo);
    double worst = 0.0;
    for (double sigma : {0.2, 0.5, 1.0}) {
      const auto sw = SwitchingSpec::gaussian(sigma);
      for (double gap = -5.0; gap <= 5.0; gap += 1.0) {
        const double F = response_center(mesh, sw, gap).value;
        const double X = flat_response_gaussian(sigma, gap);
        worst = std::max(worst, std::abs(F - X) / X);
      }
    }
    out.push_back({"flat_response", worst < 1e-8, worst, 1e-8,
                   "centre response vs erfc closed form"});
  }
  const auto g = MatchingGeometry::from_spacetime(s, numeric);
  { // jump residual
    double worst = 0.0;
    for (double w : {0.05, 0.3, 1.0, 3.0, 10.0, 30.0}) {
      const auto m = solve_mode(g, w, 0, numeric);
      worst = std::max(worst, measure_jump_residual(g, m, numeric).jump);
    }
    out.push_back({"jump_residual", worst < 1e-8, worst, 1e-8,
                   "|[d rho/dr*] - k rho(R)| relative to the local amplitude"});
  }
  { // Klein-Gordon norm and orthogonality
    double worst = 0.0;
    for (double w : {0.5, 1.0, 3.0}) {
      const auto m = solve_mode(g, w, 0, numeric);
      worst = std::max(worst, kg_norm_check(g, m, 100.0 * 2.0 * pi / m.omega,
                                            numeric));
    }
    out.push_back({"kg_norm", worst < 1e-2, worst, 1e-2,
                   "|int rho^2 / 2L - 1| over 100 wavelengths"});
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> pick(0.5, 5.0);
    double ratio = 0.0;
    for (int k = 0; k < 10; ++k) {
      double w1 = pick(rng), w2 = pick(rng);
      if (std::abs(w1 - w2) < 0.05)
        w2 += 0.1;
      const auto a = solve_mode(g, w1, 0, numeric);
      const auto b = solve_mode(g, w2, 0, numeric);
      const auto r = kg_orthogonality_check(g, a, b, 500.0, numeric);
      ratio = std::max(ratio, r.overlap / r.bound);
    }
    out.push_back({"kg_orthogonality", ratio <= 1.0, ratio, 1.0,
                   "max overlap / bound over 10 random pairs, L = 500"});
  }
  { // wavenumber convention
    const auto c = wavenumber_convention_check({M > 0 ? M : 0.5, R}, 1.0);
    out.push_back({"wavenumber_convention",
                   c.spread_omega < 1e-10 && c.spread_omega_local > 1e-3,
                   c.spread_omega, 1e-10,
                   "fit spread with omega " + fmt(c.spread_omega) +
                       ", with omega~ " + fmt(c.spread_omega_local)});
  }
  return out;
}

} // namespace shellqft
