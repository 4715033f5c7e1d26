#include "shellqft/mode_mesh.hpp"
#include "shellqft/errors.hpp"
#include "shellqft/parallel.hpp"
#include "shellqft/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace shellqft {

double ModeMesh::weight_at(double w) const {
  if (!(w >= grid.front() && w <= grid.back())) {
    std::ostringstream msg;
    msg << "mode mesh covers [" << grid.front() << ", " << grid.back()
        << "], evaluated at " << w;
    throw DomainError(msg.str());
  }
  const double g = analytic ? 1.0 : interpolant(w);
  if (r_det == 0.0)
    return g;
  const double j = sph_bessel_j(l, w * r_det);
  return g * j * j;
}

double ModeMesh::amp_sq_at(double w) const {
  if (analytic)
    return 4.0 * w * w;
  weight_at(w); // range check
  return 4.0 * w * w * interpolant(w);
}

void ModeMesh::rebuild_interpolant() {
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    g[i] = amp_sq[i] / (4.0 * grid[i] * grid[i]);
  interpolant = CubicSpline(grid, std::move(g));
}

double mesh_spacing(double R, int points_per_period) {
  if (points_per_period < 8)
    throw DomainError("mesh needs at least 8 points per resonance period");
  return std::numbers::pi / R / double(points_per_period);
}

double direct_weight(const SpacetimeModel &s, int l, double w,
                     const MeshOptions &opt, double *amp_sq,
                     double *amp_err) {
  RadialMode m;
  try {
    m = solve_mode(s, w, l, opt.solver);
  } catch (const NumericalError &e) {
    std::ostringstream msg;
    msg << "mode omega~=" << w << " l=" << l << ": " << e.what();
    throw NumericalError(msg.str());
  }
  const double a2 = m.amplitude * m.amplitude;
  if (amp_sq)
    *amp_sq = a2;
  if (amp_err)
    *amp_err = 2.0 * m.amp_uncertainty;
  double v = a2 / (4.0 * w * w);
  if (opt.r_det > 0.0) {
    const double j = sph_bessel_j(l, w * opt.r_det);
    v *= j * j;
  }
  return v;
}

namespace {

std::vector<double> uniform_grid(double a, double b, double h) {
  const std::size_t n = std::size_t(std::ceil((b - a) / h - 1e-9)) + 1;
  const std::size_t count = std::max<std::size_t>(n, 4);
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = a + (b - a) * double(i) / double(count - 1);
  g.back() = b;
  return g;
}

// geometric spacing (relative step `ratio`) from a until it reaches h, then
// uniform to b
std::vector<double> graded_grid(double a, double b, double h, double ratio) {
  std::vector<double> g;
  double x = a;
  while (x * ratio < h && x < b) {
    g.push_back(x);
    x *= 1.0 + ratio;
  }
  if (x >= b) {
    g.push_back(b);
    return g.size() >= 4 ? g : uniform_grid(a, b, (b - a) / 3.0);
  }
  auto rest = uniform_grid(x, b, h);
  g.insert(g.end(), rest.begin(), rest.end());
  return g;
}

void validate(const SpacetimeModel &s, int l, const MeshOptions &opt) {
  if (l < 0)
    throw DomainError("angular number must be nonnegative");
  if (!(opt.omega_min > 0.0) || !(opt.omega_max > opt.omega_min))
    throw DomainError("mesh range must satisfy 0 < omega_min < omega_max");
  if (opt.r_det < 0.0)
    throw DomainError("detector radius must be nonnegative");
  if (opt.r_det == 0.0 && l != 0)
    throw DomainError("only l = 0 reaches the centre");
  if (!s.is_flat() && opt.r_det >= *s.radius())
    throw DomainError("detector must sit inside the shell (r_det < R)");
}

} // namespace

ModeMesh build_mode_mesh(const SpacetimeModel &s, int l,
                         const MeshOptions &opt) {
  validate(s, l, opt);
  ModeMesh mesh;
  mesh.l = l;
  mesh.r_det = opt.r_det;
  mesh.mass = s.mass();
  mesh.shell_radius = s.is_flat() ? 0.0 : *s.radius();

  auto fill_r = [&] {
    if (opt.r_det <= 0.0)
      return;
    mesh.mode_at_r.resize(mesh.grid.size());
    for (std::size_t i = 0; i < mesh.grid.size(); ++i) {
      const double j = sph_bessel_j(l, mesh.grid[i] * opt.r_det);
      mesh.mode_at_r[i] = mesh.amp_sq[i] * opt.r_det * opt.r_det * j * j;
    }
  };

  if (s.is_flat() && opt.solver.analytic_flat) {
    mesh.analytic = true;
    mesh.grid = uniform_grid(opt.omega_min, opt.omega_max, opt.flat_spacing);
    for (double w : mesh.grid) {
      mesh.amp_sq.push_back(4.0 * w * w);
      mesh.amp_err.push_back(0.0);
      mesh.weight.push_back(
          opt.r_det > 0.0 ? std::pow(sph_bessel_j(l, w * opt.r_det), 2) : 1.0);
    }
    fill_r();
    return mesh;
  }

  const double R = s.is_flat() ? opt.solver.flat_matching_radius : *s.radius();
  mesh.grid = graded_grid(opt.omega_min, opt.omega_max,
                          mesh_spacing(R, opt.points_per_period),
                          opt.low_end_ratio);
  auto solve_all = [&](const std::vector<double> &ws, std::vector<double> &wt,
                       std::vector<double> &a2, std::vector<double> &ae) {
    wt.assign(ws.size(), 0.0);
    a2.assign(ws.size(), 0.0);
    ae.assign(ws.size(), 0.0);
    parallel_for(ws.size(), opt.threads, [&](std::size_t i) {
      wt[i] = direct_weight(s, l, ws[i], opt, &a2[i], &ae[i]);
    });
  };
  solve_all(mesh.grid, mesh.weight, mesh.amp_sq, mesh.amp_err);

  for (int d = 0;; ++d) {
    mesh.rebuild_interpolant();
    if (!opt.check_refinement)
      break;
    std::vector<double> mid(mesh.grid.size() - 1);
    for (std::size_t i = 0; i + 1 < mesh.grid.size(); ++i)
      mid[i] = 0.5 * (mesh.grid[i] + mesh.grid[i + 1]);
    std::vector<double> mw, ma, me;
    solve_all(mid, mw, ma, me);
    double err = 0.0;
    for (std::size_t i = 0; i < mid.size(); ++i) {
      const double direct = ma[i] / (4.0 * mid[i] * mid[i]);
      err = std::max(err, std::abs(mesh.interpolant(mid[i]) / direct - 1.0));
    }
    mesh.refinement_error = err;
    if (err <= opt.refinement_target)
      break;
    if (d >= opt.max_doublings) {
      std::ostringstream msg;
      msg << "mode mesh (l=" << l << ") reached interpolation error " << err
          << " after " << d << " doublings; target "
          << opt.refinement_target;
      throw NumericalError(msg.str());
    }
    const std::size_t n = mesh.grid.size();
    std::vector<double> g, w, a, e;
    g.reserve(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      g.push_back(mesh.grid[i]);
      w.push_back(mesh.weight[i]);
      a.push_back(mesh.amp_sq[i]);
      e.push_back(mesh.amp_err[i]);
      if (i + 1 < n) {
        g.push_back(mid[i]);
        w.push_back(mw[i]);
        a.push_back(ma[i]);
        e.push_back(me[i]);
      }
    }
    mesh.grid = std::move(g);
    mesh.weight = std::move(w);
    mesh.amp_sq = std::move(a);
    mesh.amp_err = std::move(e);
  }
  fill_r();
  return mesh;
}

} // namespace shellqft
