#include "shellqft/commands.hpp"
#include "shellqft/errors.hpp"
#include "shellqft/mesh_cache.hpp"
#include "shellqft/parallel.hpp"
#include "shellqft/response.hpp"
#include "shellqft/validation.hpp"

#include <chrono>
#include <ctime>
#include <memory>
#include <sstream>

namespace shellqft {

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char *jump_name(JumpConvention j) {
  return j == JumpConvention::AsPublished ? "as_published" : "flux_conserving";
}

class MeshSource {
public:
  explicit MeshSource(const CommandOptions &o) {
    if (!o.cache_dir.empty())
      m_cache = std::make_unique<MeshCache>(o.cache_dir);
  }
  ModeMesh get(const SpacetimeModel &s, int l, const MeshOptions &opt) {
    if (m_cache)
      return m_cache->get_or_build(s, l, opt);
    return build_mode_mesh(s, l, opt);
  }

private:
  std::unique_ptr<MeshCache> m_cache;
};

MeshOptions mesh_options(const RunConfig &c, const CommandOptions &o,
                         double needed) {
  MeshOptions m = c.mesh;
  m.threads = o.threads;
  if (c.omega_max_auto)
    m.omega_max = needed;
  else if (m.omega_max < needed) {
    std::ostringstream msg;
    msg << "mesh reaches " << m.omega_max << " but the response needs "
        << needed;
    throw ConfigError("mesh.omega_max", msg.str());
  }
  return m;
}

} // namespace

std::vector<std::string> provenance_header(const std::string &command,
                                           const RunConfig &c,
                                           const CommandOptions &o) {
  std::vector<std::string> h;
  h.push_back(std::string("shellqft ") + version);
  h.push_back("command: " + command);
  h.push_back("fingerprint: " + fingerprint_hex(config_fingerprint(c)));
  h.push_back("created: " + (o.timestamp.empty() ? utc_now() : o.timestamp));
  std::ostringstream units;
  units << "units: hbar = c = R_Sch = 1; gap_unit = " << to_string(c.gap_unit);
  if (c.spacetime == SpacetimeModel::Kind::Shell && c.M > 0.0)
    units << "; k_B T_Hloc = "
          << format_double(
                 UnitSystem::local_hawking(c.spacetime_model(), c.blueshift)
                     .hawking_energy())
          << (c.blueshift ? " (blueshifted)" : " (not blueshifted)");
  h.push_back(units.str());
  h.push_back(std::string("conventions: jump = ") + jump_name(c.mesh.solver.jump) +
              "; exterior wavenumber in r* = omega; frequencies indexed by "
              "omega~ = omega/sqrt(f(R))");
  for (const auto &[k, v] : c.canonical)
    h.push_back("config " + k + " = " + v);
  return h;
}

std::string render(const Table &t, const std::string &format) {
  return format == "json" ? to_json(t) : to_csv(t);
}

CommandResult cmd_modes(const RunConfig &c, const CommandOptions &o) {
  CommandResult r;
  const auto s = c.spacetime_model();
  const auto &grid = c.modes_grid;
  std::vector<double> amp(grid.size()), err(grid.size());
  parallel_for(grid.size(), o.threads, [&](std::size_t i) {
    try {
      const auto m = solve_mode(s, grid[i], c.modes_l, c.mesh.solver);
      amp[i] = m.amplitude * m.amplitude;
      err[i] = 2.0 * m.amp_uncertainty;
    } catch (const NumericalError &e) {
      std::ostringstream msg;
      msg << "mode omega~=" << format_double(grid[i]) << ": " << e.what();
      throw NumericalError(msg.str());
    }
  });
  r.table.header = provenance_header("modes", c, o);
  r.table.header.push_back("l = " + std::to_string(c.modes_l) +
                           "; amp_err = relative error estimate of amp_sq_shell");
  r.table.columns = {"omega_local", "amp_sq_shell", "amp_sq_flat", "amp_err"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    r.table.rows.push_back(
        {grid[i], amp[i], 4.0 * grid[i] * grid[i], err[i]});
  return r;
}

CommandResult cmd_response(const RunConfig &c, const CommandOptions &o) {
  CommandResult r;
  const auto s = c.spacetime_model();
  const auto sw = c.switching_spec();
  const auto gaps = c.natural_gaps();
  if (gaps.empty())
    throw ConfigError("detector.gaps", "no gaps given");
  MeshSource meshes(o);
  auto mo = mesh_options(c, o, required_omega_max(sw, gaps));
  const std::size_t n = gaps.size();
  std::vector<double> Fs(n), Ff(n), err(n);

  if (c.r_det == 0.0) {
    const auto shell_mesh = meshes.get(s, 0, mo);
    const auto sweep = gap_sweep(shell_mesh, sw, gaps, c.response, o.threads);
    for (std::size_t i = 0; i < n; ++i) {
      Fs[i] = sweep.shell.values[i];
      Ff[i] = sweep.flat.values[i];
      err[i] = sweep.shell.quadrature_error[i] + sweep.flat.quadrature_error[i];
    }
    r.warnings.clear();
  } else {
    const int lmax =
        c.l_max >= 0 ? c.l_max : required_l_max(sw, gaps, c.r_det);
    std::vector<ModeMesh> shell, flat;
    for (int l = 0; l <= lmax; ++l) {
      shell.push_back(meshes.get(s, l, mo));
      flat.push_back(build_mode_mesh(SpacetimeModel::flat(), l, mo));
    }
    parallel_for(n, o.threads, [&](std::size_t i) {
      const auto a = response_at_radius(shell, sw, gaps[i], c.response);
      const auto b = response_at_radius(flat, sw, gaps[i], c.response);
      Fs[i] = a.point.value;
      Ff[i] = b.point.value;
      err[i] = a.point.error + b.point.error;
    });
  }
  r.table.header = provenance_header("response", c, o);
  r.table.columns = {"gap",      "gap_unit", "F_shell", "F_flat",
                     "abs_diff", "rel_diff", "quad_err"};
  for (std::size_t i = 0; i < n; ++i) {
    const double d = Fs[i] - Ff[i];
    r.table.rows.push_back({c.gaps[i], std::string(to_string(c.gap_unit)),
                            Fs[i], Ff[i], d, d / Ff[i], err[i]});
  }
  return r;
}

CommandResult cmd_radius_sweep(const RunConfig &c, const CommandOptions &o) {
  if (c.spacetime != SpacetimeModel::Kind::Shell)
    throw ConfigError("spacetime.kind", "radius-sweep needs a shell");
  if (c.radii.empty())
    throw ConfigError("radius_sweep.radii", "no radii given");
  if (c.r_det != 0.0)
    throw ConfigError("detector.r", "radius-sweep evaluates the centre");
  CommandResult r;
  const auto sw = c.switching_spec();
  double gap_given = 0.0;
  for (const auto &[k, v] : c.canonical)
    if (k == "detector.gap")
      gap_given = std::stod(v);
  std::vector<double> gap_nat;
  for (double R : c.radii) {
    const auto s = SpacetimeModel::shell(c.M, R);
    const auto u = c.gap_unit == EnergyUnit::LocalHawking
                       ? UnitSystem::local_hawking(s, c.blueshift)
                       : UnitSystem::natural();
    gap_nat.push_back(u.to_natural(gap_given, c.gap_unit));
  }
  MeshSource meshes(o);
  auto mo = mesh_options(c, o, required_omega_max(sw, gap_nat));
  const auto flat_mesh = build_mode_mesh(SpacetimeModel::flat(), 0, mo);
  r.table.header = provenance_header("radius-sweep", c, o);
  r.table.columns = {"R", "F_shell", "F_flat", "abs_diff"};
  for (std::size_t i = 0; i < c.radii.size(); ++i) {
    const double R = c.radii[i];
    if (sw.sigma() >= 2.0 * R) {
      std::ostringstream msg;
      msg << "R=" << format_double(R) << ": sigma=" << format_double(sw.sigma())
          << " is not small against 2R; the response is not local";
      r.warnings.push_back(msg.str());
    }
    const auto s = SpacetimeModel::shell(c.M, R);
    const auto mesh = meshes.get(s, 0, mo);
    const double Fs = response_center(mesh, sw, gap_nat[i], c.response).value;
    const double Ff =
        response_center(flat_mesh, sw, gap_nat[i], c.response).value;
    r.table.rows.push_back({R, Fs, Ff, Fs - Ff});
  }
  for (const auto &w : r.warnings)
    r.table.header.push_back("warning: " + w);
  return r;
}

CommandResult cmd_validate(const RunConfig &c, const CommandOptions &o) {
  CommandResult r;
  const auto suites = run_validation_suites(c.spacetime_model(), c.mesh.solver);
  r.table.header = provenance_header("validate", c, o);
  r.table.header.push_back(
      std::string("resolved: k_B T_Hloc ") +
      (c.blueshift ? "includes" : "omits") +
      " the interior blueshift; the Omega = 20 tail bound is checked in "
      "natural units; the asymptotic phase is reported, not asserted");
  r.table.columns = {"suite", "status", "measured", "threshold", "detail"};
  for (const auto &s : suites) {
    r.table.rows.push_back({s.name, std::string(s.passed ? "pass" : "fail"),
                            s.measured, s.threshold, s.detail});
    if (!s.passed)
      r.exit_code = exit_validation_failure;
  }
  return r;
}

} // namespace shellqft
