#include "shellqft/switching.hpp"
#include "shellqft/errors.hpp"
#include "shellqft/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace shellqft {

namespace {
constexpr double pi = std::numbers::pi;

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("switching width sigma must be positive");
}

// smooth step: 1 at u <= 0, 0 at u >= 1, C-infinity in between
double smooth_window(double u) {
  if (u <= 0.0)
    return 1.0;
  if (u >= 1.0)
    return 0.0;
  const double a = std::exp(-1.0 / (1.0 - u));
  const double b = std::exp(-1.0 / u);
  return a / (a + b);
}
} // namespace

SwitchingSpec SwitchingSpec::gaussian(double sigma) {
  check_sigma(sigma);
  return {Kind::Gaussian, sigma};
}

SwitchingSpec SwitchingSpec::lorentzian(double sigma) {
  check_sigma(sigma);
  return {Kind::Lorentzian, sigma};
}

SwitchingSpec SwitchingSpec::compact_bump(double sigma, double halfwidth,
                                          double taper) {
  check_sigma(sigma);
  if (!(halfwidth >= 3.0 * sigma) || !std::isfinite(halfwidth))
    throw DomainError("compact switching needs support_halfwidth >= 3 sigma");
  if (!(taper > 0.0 && taper <= 1.0))
    throw DomainError("compact switching taper must lie in (0, 1]");
  SwitchingSpec sw(Kind::CompactBump, sigma);
  sw.m_halfwidth = halfwidth;
  sw.m_taper = taper;

  // Gauss-Legendre panels on [0, w], denser over the taper
  constexpr int core_panels = 96;
  constexpr int taper_panels = 48;
  using GL = boost::math::quadrature::gauss<double, 16>;
  const auto &abscissa = GL::abscissa();
  const auto &weight = GL::weights();
  auto table = std::make_shared<CosineTable>();
  const double edge = halfwidth * (1.0 - taper);
  auto add_panels = [&](double a, double b, int n) {
    const double h = (b - a) / n;
    for (int p = 0; p < n; ++p) {
      const double mid = a + (p + 0.5) * h;
      const double half = 0.5 * h;
      auto push = [&](double x, double w) {
        const double tau = mid + half * x;
        table->nodes.push_back(tau);
        // chi^ = sqrt(2/pi) int_0^w chi cos(Omega tau)
        table->weights.push_back(std::sqrt(2.0 / pi) * half * w *
                                 sw.profile(tau));
      };
      for (std::size_t k = 0; k < abscissa.size(); ++k) {
        if (abscissa[k] == 0.0) {
          push(0.0, weight[k]);
          continue;
        }
        push(abscissa[k], weight[k]);
        push(-abscissa[k], weight[k]);
      }
    }
  };
  if (edge > 0.0)
    add_panels(0.0, edge, core_panels);
  add_panels(edge, halfwidth, taper_panels);
  sw.m_table = table;

  // tail: scan outward until |chi^|^2 stays below 1e-20 of the peak over a
  // few consecutive half-periods of the support (the transform of a compactly
  // supported window decays only like exp(-c sqrt(Omega)))
  const double peak = sw.ft_squared(0.0);
  const double dz = 0.25 * pi / halfwidth;
  double z = 0.0;
  double last_big = 0.0;
  const double limit = 600.0 / sigma;
  while (z < limit) {
    z += dz;
    if (sw.ft_squared(z) > 1e-20 * peak)
      last_big = z;
    else if (z - last_big > 8.0 * pi / halfwidth && z > 4.0 / sigma)
      break;
  }
  table->tail = std::min(last_big + dz, limit);

  {
    quad::Tolerance tol{1e-13, 0.0, 200000};
    const double breaks[3] = {0.0, edge, halfwidth};
    auto sq = [&](double t) {
      const double c = sw.profile(t);
      return c * c;
    };
    table->energy = 2.0 * quad::integrate(sq, breaks, tol).value;
  }
  return sw;
}

double SwitchingSpec::window(double tau) const {
  const double t = std::abs(tau);
  if (t >= m_halfwidth)
    return 0.0;
  const double edge = m_halfwidth * (1.0 - m_taper);
  return smooth_window((t - edge) / (m_halfwidth - edge));
}

double SwitchingSpec::profile(double tau) const {
  const double x = tau / m_sigma;
  switch (m_kind) {
  case Kind::Gaussian:
    return std::exp(-0.5 * x * x);
  case Kind::Lorentzian:
    return 1.0 / (1.0 + x * x);
  case Kind::CompactBump:
    return std::exp(-0.5 * x * x) * window(tau);
  }
  return 0.0;
}

double SwitchingSpec::ft(double omega) const {
  const double s = m_sigma;
  switch (m_kind) {
  case Kind::Gaussian:
    return s * std::exp(-0.5 * s * s * omega * omega);
  case Kind::Lorentzian:
    return std::sqrt(pi / 2.0) * s * std::exp(-s * std::abs(omega));
  case Kind::CompactBump: {
    double sum = 0.0;
    const auto &x = m_table->nodes;
    const auto &w = m_table->weights;
    for (std::size_t i = 0; i < x.size(); ++i)
      sum += w[i] * std::cos(omega * x[i]);
    return sum;
  }
  }
  return 0.0;
}

double SwitchingSpec::ft_squared(double omega) const {
  const double s = m_sigma;
  switch (m_kind) {
  case Kind::Gaussian:
    return s * s * std::exp(-s * s * omega * omega);
  case Kind::Lorentzian:
    return 0.5 * pi * s * s * std::exp(-2.0 * s * std::abs(omega));
  case Kind::CompactBump: {
    const double c = ft(omega);
    return c * c;
  }
  }
  return 0.0;
}

double SwitchingSpec::tail_extent() const {
  switch (m_kind) {
  case Kind::Gaussian:
    return 12.0 / m_sigma;
  case Kind::Lorentzian:
    return 69.0 / m_sigma;
  case Kind::CompactBump:
    return m_table->tail;
  }
  return 0.0;
}

double SwitchingSpec::energy() const {
  switch (m_kind) {
  case Kind::Gaussian:
    return m_sigma * std::sqrt(pi);
  case Kind::Lorentzian:
    return 0.5 * pi * m_sigma;
  case Kind::CompactBump:
    return m_table->energy;
  }
  return 0.0;
}

const char *to_string(SwitchingSpec::Kind k) {
  switch (k) {
  case SwitchingSpec::Kind::Gaussian:
    return "gaussian";
  case SwitchingSpec::Kind::Lorentzian:
    return "lorentzian";
  case SwitchingSpec::Kind::CompactBump:
    return "compact_bump";
  }
  return "?";
}

double parseval_check(const SwitchingSpec &sw) {
  quad::Tolerance tol{1e-14, 0.0, 400000};
  const double s = sw.sigma();
  // time side: even integrand, integrate [0, inf) as panels to a far cutoff
  auto chi2 = [&](double t) {
    const double c = sw.profile(t);
    return c * c;
  };
  double time_side = 0.0;
  switch (sw.kind()) {
  case SwitchingSpec::Kind::Gaussian: {
    const double b[3] = {0.0, 5.0 * s, 40.0 * s};
    time_side = 2.0 * quad::integrate(chi2, b, tol).value;
    break;
  }
  case SwitchingSpec::Kind::Lorentzian: {
    // t = s tan(u) maps [0, inf) onto [0, pi/2)
    auto mapped = [&](double u) {
      const double c = std::cos(u);
      return chi2(s * std::tan(u)) * s / (c * c);
    };
    const double b[3] = {0.0, 0.25 * pi, 0.5 * pi};
    time_side = 2.0 * quad::integrate(mapped, b, tol).value;
    break;
  }
  case SwitchingSpec::Kind::CompactBump: {
    const double w = sw.support_halfwidth();
    const double b[3] = {0.0, w * (1.0 - sw.taper()), w};
    time_side = 2.0 * quad::integrate(chi2, b, tol).value;
    break;
  }
  }
  auto hat2 = [&](double z) { return sw.ft_squared(z); };
  std::vector<double> b;
  const double top = sw.tail_extent() * 1.5;
  const int n = 64;
  for (int i = 0; i <= n; ++i)
    b.push_back(top * i / n);
  const double freq_side = 2.0 * quad::integrate(hat2, b, tol).value;
  return std::abs(time_side - freq_side) / time_side;
}

AdiabaticWeight adiabatic_limit_weight(double gap) {
  if (gap < 0.0)
    return {true, -gap};
  return {false, 0.0};
}

} // namespace shellqft
