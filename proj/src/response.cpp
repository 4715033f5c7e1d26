#include "shellqft/response.hpp"
#include "shellqft/errors.hpp"
#include "shellqft/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace shellqft {

namespace {
constexpr double pi = std::numbers::pi;

double upper_limit(const SwitchingSpec &sw, double gap) {
  return std::max(0.0, -gap) + sw.tail_extent();
}

// int_{omega_min}^{top} (w/2pi) weight |chi^(gap + w)|^2 plus the frozen-weight
// piece below omega_min
ResponsePoint integrate_weight(const ModeMesh &mesh, const SwitchingSpec &sw,
                               double gap, const ResponseOptions &opt) {
  const double lo = mesh.omega_min();
  const double top = upper_limit(sw, gap);
  if (mesh.omega_max() < top) {
    std::ostringstream msg;
    msg << "mode mesh covers [" << lo << ", " << mesh.omega_max()
        << "] but the response at gap " << gap << " needs up to " << top;
    throw DomainError(msg.str());
  }
  auto integrand = [&](double w) {
    return w / (2.0 * pi) * mesh.weight_at(w) * sw.ft_squared(gap + w);
  };
  std::vector<double> breaks;
  breaks.push_back(lo);
  for (double k : mesh.grid)
    if (k > lo && k < top)
      breaks.push_back(k);
  breaks.push_back(top);
  const double peak = -gap;
  if (peak > lo && peak < top) {
    breaks.push_back(peak);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  }
  // the compact-bump transform is a cosine sum whose terms cancel in the
  // tail, so |chi^|^2 carries roundoff of about 1e-16 of its peak there and a
  // relative target on a response far below that level would never be met
  quad::Tolerance tol = opt.quadrature;
  if (sw.kind() == SwitchingSpec::Kind::CompactBump)
    tol.abs = std::max(tol.abs, 1e-16 * sw.ft_squared(0.0) /
                                    (sw.sigma() * sw.sigma()));
  auto main = quad::integrate(integrand, breaks, tol);

  const double w0 = mesh.weight_at(lo);
  auto frozen = [&](double w) {
    return w / (2.0 * pi) * w0 * sw.ft_squared(gap + w);
  };
  std::vector<double> low{0.0, lo};
  if (peak > 0.0 && peak < lo)
    low.insert(low.begin() + 1, peak);
  auto below = quad::integrate(frozen, low, tol);
  double bound = 0.0;
  if (!mesh.analytic || mesh.r_det > 0.0) {
    // linear extrapolation of the weight's change down to omega~ = 0
    const double w1 = mesh.weight_at(mesh.grid[1]);
    const double slope = (w1 - w0) / (mesh.grid[1] - lo);
    const double scale = std::max(std::abs(w0), 1e-300);
    bound = std::abs(below.value) * std::abs(slope) * lo / scale;
  }
  ResponsePoint p;
  p.below_cutoff = below.value;
  p.value = main.value + below.value;
  p.error = main.error + below.error + bound;
  return p;
}
} // namespace

ResponsePoint response_center(const ModeMesh &mesh, const SwitchingSpec &sw,
                              double gap, const ResponseOptions &opt) {
  if (mesh.l != 0 || mesh.r_det != 0.0)
    throw DomainError("the centre response needs the l = 0 centre mesh");
  return integrate_weight(mesh, sw, gap, opt);
}

double required_omega_max(const SwitchingSpec &sw,
                          const std::vector<double> &gaps) {
  double top = sw.tail_extent();
  for (double g : gaps)
    top = std::max(top, upper_limit(sw, g));
  return top;
}

double flat_response_gaussian(double sigma, double gap) {
  const long double s = sigma, x = sigma * gap;
  const long double bracket =
      std::exp(-x * x) / (2.0L * s * s) -
      gap * std::sqrt(std::numbers::pi_v<long double>) / (2.0L * s) *
          std::erfc(x);
  return double(s * s / (2.0L * std::numbers::pi_v<long double>) * bracket);
}

int required_l_max(const SwitchingSpec &sw, const std::vector<double> &gaps,
                   double r_det) {
  return int(std::ceil(required_omega_max(sw, gaps) * r_det)) + 10;
}

RadiusResponse response_at_radius(const std::vector<ModeMesh> &meshes,
                                  const SwitchingSpec &sw, double gap,
                                  const ResponseOptions &opt) {
  if (meshes.empty())
    throw DomainError("response at radius needs at least the l = 0 mesh");
  const double r = meshes.front().r_det;
  if (!(r > 0.0))
    throw DomainError("response at radius needs meshes built for r_det > 0");
  const int needed = required_l_max(sw, {gap}, r);
  RadiusResponse out;
  double sum = 0.0, err = 0.0, below = 0.0;
  for (std::size_t l = 0; l < meshes.size(); ++l) {
    const auto &m = meshes[l];
    if (m.l != int(l) || m.r_det != r)
      throw DomainError("radius meshes must be indexed by l at one r_det");
    const auto p = integrate_weight(m, sw, gap, opt);
    const double k = double(2 * l + 1);
    sum += k * p.value;
    err += k * p.error;
    below += k * p.below_cutoff;
    out.l_used = int(l);
    out.truncation = sum > 0.0 ? k * p.value / sum : 0.0;
    if (int(l) >= needed && k * p.value <= 1e-10 * sum) {
      out.point = {sum, err + k * p.value, below};
      return out;
    }
  }
  std::ostringstream msg;
  msg << "l-sum not converged at l = " << out.l_used << " (last term "
      << out.truncation << " of the sum; need l >= " << needed
      << " and a term below 1e-10)";
  throw NumericalError(msg.str());
}

ResponseCurve evaluate_curve(const ModeMesh &mesh, const SwitchingSpec &sw,
                             const std::vector<double> &gaps,
                             const ResponseOptions &opt, unsigned threads) {
  ResponseCurve c;
  c.gaps = gaps;
  c.values.assign(gaps.size(), 0.0);
  c.quadrature_error.assign(gaps.size(), 0.0);
  parallel_for(gaps.size(), threads, [&](std::size_t i) {
    const auto p = response_center(mesh, sw, gaps[i], opt);
    c.values[i] = p.value;
    c.quadrature_error[i] = p.error;
  });
  return c;
}

GapSweep gap_sweep(const ModeMesh &shell_mesh, const SwitchingSpec &sw,
                   const std::vector<double> &gaps, const ResponseOptions &opt,
                   unsigned threads) {
  GapSweep out;
  MeshOptions flat_opt;
  flat_opt.omega_min = shell_mesh.omega_min();
  flat_opt.omega_max = shell_mesh.omega_max();
  const auto flat_mesh =
      build_mode_mesh(SpacetimeModel::flat(), 0, flat_opt);
  out.shell = evaluate_curve(shell_mesh, sw, gaps, opt, threads);
  out.flat = evaluate_curve(flat_mesh, sw, gaps, opt, threads);
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double d = out.shell.values[i] - out.flat.values[i];
    out.abs_diff.push_back(d);
    out.rel_diff.push_back(d / out.flat.values[i]);
  }
  out.shell_mesh = shell_mesh;
  return out;
}

GapSweep gap_sweep(const SpacetimeModel &s, const SwitchingSpec &sw,
                   const std::vector<double> &gaps, MeshOptions mesh,
                   const ResponseOptions &opt) {
  mesh.omega_max = std::max(mesh.omega_max, required_omega_max(sw, gaps));
  mesh.r_det = 0.0;
  const auto shell_mesh = build_mode_mesh(s, 0, mesh);
  return gap_sweep(shell_mesh, sw, gaps, opt, mesh.threads);
}

RadiusSweep radius_sweep(double M, const std::vector<double> &radii,
                         const SwitchingSpec &sw, double gap, MeshOptions mesh,
                         const ResponseOptions &opt) {
  RadiusSweep out;
  mesh.omega_max = std::max(mesh.omega_max, required_omega_max(sw, {gap}));
  mesh.r_det = 0.0;
  const auto flat_mesh = build_mode_mesh(SpacetimeModel::flat(), 0, mesh);
  const auto flat = response_center(flat_mesh, sw, gap, opt);
  for (double R : radii) {
    const auto s = SpacetimeModel::shell(M, R);
    if (sw.sigma() >= 2.0 * R) {
      std::ostringstream msg;
      msg << "R=" << R << ": switching width sigma=" << sw.sigma()
          << " is not small against the shell diameter 2R=" << 2.0 * R
          << "; the detector response is not local to the interior";
      out.warnings.push_back(msg.str());
    }
    const auto shell_mesh = build_mode_mesh(s, 0, mesh);
    const auto p = response_center(shell_mesh, sw, gap, opt);
    out.rows.push_back(
        {R, p.value, flat.value, p.value - flat.value, p.error + flat.error});
  }
  return out;
}

} // namespace shellqft
