#include "shellqft/config.hpp"
#include "shellqft/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace shellqft {

const std::vector<ConfigKey> &config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"spacetime.kind", "shell", true, "shell | flat"},
      {"spacetime.M", "0.5", true, "ADM mass (R_Sch = 2M = 1 by default)"},
      {"spacetime.R", "3", true, "shell areal radius, R > 2M"},
      {"switching.kind", "gaussian", true,
       "gaussian | lorentzian | compact_bump"},
      {"switching.sigma", "0.5", true, "switching width (proper time)"},
      {"switching.support_halfwidth", "auto", true,
       "compact_bump half support, >= 3 sigma (auto: 5 sigma)"},
      {"switching.taper", "0.1", true,
       "compact_bump: fraction of the support used to taper to zero"},
      {"detector.r", "0", true, "detector radius (0: centre; < R)"},
      {"detector.gaps", "-20:20:1", true, "gap grid, start:stop:step or list"},
      {"detector.gap", "0", true, "single gap for radius-sweep"},
      {"detector.gap_unit", "auto", true,
       "natural | local_hawking | auto (shell: local_hawking, flat: natural)"},
      {"units.blueshift", "true", true,
       "include 1/sqrt(f(R)) in k_B T_Hloc"},
      {"mesh.omega_min", "0.001", true, "lowest tabulated omega~"},
      {"mesh.omega_max", "auto", true,
       "highest tabulated omega~ (auto: what the gaps need)"},
      {"mesh.points_per_period", "16", true, "grid points per pi/R, >= 8"},
      {"mesh.low_end_ratio", "0.03", true,
       "relative spacing of the graded grid near omega_min"},
      {"mesh.refinement_target", "1e-05", true,
       "max relative midpoint interpolation error"},
      {"mesh.max_doublings", "3", true, "grid doublings allowed"},
      {"mesh.l_max", "auto", true, "highest l for off-centre detectors"},
      {"solver.rtol", "1e-10", true, "relative step tolerance"},
      {"solver.atol", "1e-12", true, "absolute step tolerance"},
      {"solver.max_steps", "20000000", true, "step budget per mode"},
      {"solver.potential_tol", "1e-08", true,
       "r_max: V_l/omega^2 below this"},
      {"solver.min_extent", "20", true, "r_max >= R + min_extent/omega"},
      {"solver.steps_per_wavelength", "50", true, "step ceiling"},
      {"solver.spread_tol", "1e-06", true,
       "max amplitude spread over the last wavelength"},
      {"solver.wkb_extraction", "true", true,
       "divide the local wavenumber out of the amplitude fit"},
      {"solver.jump", "as_published", true, "as_published | flux_conserving"},
      {"quadrature.rtol", "1e-10", true, "response quadrature tolerance"},
      {"modes.grid", "0.01:30:0.01", true, "omega~ grid for `modes`"},
      {"modes.l", "0", true, "angular number for `modes`"},
      {"radius_sweep.radii", "3,5,10,20", true, "shell radii"},
      {"output.path", "", false, "output file (also --out)"},
      {"output.format", "csv", true, "csv | json"},
  };
  return keys;
}

namespace {

const ConfigKey *find_key(const std::string &k) {
  for (const auto &c : config_keys())
    if (k == c.name)
      return &c;
  return nullptr;
}

std::string trim(const std::string &s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos)
    return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string &key, const std::string &v) {
  const std::string t = trim(v);
  char *end = nullptr;
  errno = 0;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE ||
      !std::isfinite(x))
    throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

long to_int(const std::string &key, const std::string &v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e15)
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  return long(x);
}

bool to_bool(const std::string &key, const std::string &v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes")
    return true;
  if (t == "false" || t == "0" || t == "no")
    return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

// shortest text that parses back to the same double
std::string short_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// canonical form of a grid: start:stop:step or a list, values normalised
std::string canonical_grid(const std::string &key, const std::string &text) {
  const std::string t = trim(text);
  std::string out;
  const char sep = t.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(t);
  std::string p;
  while (std::getline(ss, p, sep)) {
    if (!out.empty())
      out += sep;
    out += short_double(to_double(key, p));
  }
  return out;
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_grid(const std::string &key,
                               const std::string &text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.empty())
    return out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string p;
    while (std::getline(ss, p, ':'))
      parts.push_back(p);
    if (parts.size() != 3)
      throw ConfigError(key, "grid must be start:stop:step");
    const double a = to_double(key, parts[0]);
    const double b = to_double(key, parts[1]);
    const double h = to_double(key, parts[2]);
    if (!(h > 0.0) || b < a)
      throw ConfigError(key, "grid needs step > 0 and stop >= start");
    const double n = std::floor((b - a) / h + 1e-9);
    if (n > 1e7)
      throw ConfigError(key, "grid has more than 1e7 points");
    for (long i = 0; i <= long(n); ++i)
      out.push_back(a + double(i) * h);
    return out;
  }
  std::stringstream ss(t);
  std::string p;
  while (std::getline(ss, p, ','))
    out.push_back(to_double(key, p));
  return out;
}

void set_config_value(RawConfig &raw, const std::string &key,
                      const std::string &value) {
  if (!find_key(key))
    throw ConfigError(key, "unknown configuration key");
  raw[key] = trim(value);
}

RawConfig parse_config_text(const std::string &text,
                            const std::string &source) {
  RawConfig raw;
  std::stringstream ss(text);
  std::string line;
  int n = 0;
  while (std::getline(ss, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", source + ":" + std::to_string(n) +
                                ": expected 'key = value'");
    set_config_value(raw, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return raw;
}

RawConfig read_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("--config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

RunConfig resolve_config(const RawConfig &given) {
  RawConfig raw;
  for (const auto &k : config_keys())
    raw[k.name] = k.default_value;
  for (const auto &[k, v] : given) {
    if (!find_key(k))
      throw ConfigError(k, "unknown configuration key");
    raw[k] = v;
  }
  auto get = [&](const char *k) -> const std::string & { return raw.at(k); };

  RunConfig c;
  std::map<std::string, std::string> canon;
  auto put = [&](const char *k, std::string v) { canon[k] = std::move(v); };

  {
    const auto &v = get("spacetime.kind");
    if (v == "shell")
      c.spacetime = SpacetimeModel::Kind::Shell;
    else if (v == "flat")
      c.spacetime = SpacetimeModel::Kind::Flat;
    else
      throw ConfigError("spacetime.kind", "expected shell or flat, got '" +
                                              v + "'");
    put("spacetime.kind", v);
  }
  const bool shell = c.spacetime == SpacetimeModel::Kind::Shell;
  c.M = to_double("spacetime.M", get("spacetime.M"));
  c.R = to_double("spacetime.R", get("spacetime.R"));
  if (shell) {
    if (c.M < 0.0)
      throw ConfigError("spacetime.M", "mass must be nonnegative");
    if (!(c.R > 2.0 * c.M))
      throw ConfigError("spacetime.R", "shell needs R > 2M");
    put("spacetime.M", short_double(c.M));
    put("spacetime.R", short_double(c.R));
  }

  {
    const auto &v = get("switching.kind");
    if (v == "gaussian")
      c.switching = SwitchingSpec::Kind::Gaussian;
    else if (v == "lorentzian")
      c.switching = SwitchingSpec::Kind::Lorentzian;
    else if (v == "compact_bump")
      c.switching = SwitchingSpec::Kind::CompactBump;
    else if (v == "sudden" || v == "rectangular")
      throw ConfigError("switching.kind",
                        "sudden switching is not supported: it requires an "
                        "infinite amount of energy and its transform has "
                        "heavy tails; use compact_bump");
    else
      throw ConfigError("switching.kind",
                        "expected gaussian, lorentzian or compact_bump, got '" +
                            v + "'");
    put("switching.kind", v);
  }
  c.sigma = to_double("switching.sigma", get("switching.sigma"));
  if (!(c.sigma > 0.0))
    throw ConfigError("switching.sigma", "must be positive");
  put("switching.sigma", short_double(c.sigma));
  if (c.switching == SwitchingSpec::Kind::CompactBump) {
    const auto &hw = get("switching.support_halfwidth");
    c.support_halfwidth = hw == "auto"
                              ? 5.0 * c.sigma
                              : to_double("switching.support_halfwidth", hw);
    if (!(c.support_halfwidth >= 3.0 * c.sigma))
      throw ConfigError("switching.support_halfwidth", "must be >= 3 sigma");
    c.taper = to_double("switching.taper", get("switching.taper"));
    if (!(c.taper > 0.0 && c.taper <= 1.0))
      throw ConfigError("switching.taper", "must lie in (0, 1]");
    put("switching.support_halfwidth", short_double(c.support_halfwidth));
    put("switching.taper", short_double(c.taper));
  }

  c.r_det = to_double("detector.r", get("detector.r"));
  if (c.r_det < 0.0)
    throw ConfigError("detector.r", "must be nonnegative");
  if (shell && c.r_det >= c.R)
    throw ConfigError("detector.r", "detector must sit inside the shell");
  put("detector.r", short_double(c.r_det));
  c.gaps = parse_grid("detector.gaps", get("detector.gaps"));
  put("detector.gaps", canonical_grid("detector.gaps", get("detector.gaps")));
  {
    const double g = to_double("detector.gap", get("detector.gap"));
    put("detector.gap", short_double(g));
  }
  {
    const auto &v = get("detector.gap_unit");
    if (v == "auto")
      c.gap_unit = shell && c.M > 0.0 ? EnergyUnit::LocalHawking
                                      : EnergyUnit::Natural;
    else if (v == "natural")
      c.gap_unit = EnergyUnit::Natural;
    else if (v == "local_hawking")
      c.gap_unit = EnergyUnit::LocalHawking;
    else
      throw ConfigError("detector.gap_unit",
                        "expected natural, local_hawking or auto");
    if (c.gap_unit == EnergyUnit::LocalHawking && !(shell && c.M > 0.0))
      throw ConfigError("detector.gap_unit",
                        "local_hawking needs a shell with M > 0");
    put("detector.gap_unit", to_string(c.gap_unit));
  }
  c.blueshift = to_bool("units.blueshift", get("units.blueshift"));
  put("units.blueshift", c.blueshift ? "true" : "false");

  auto &m = c.mesh;
  m.omega_min = to_double("mesh.omega_min", get("mesh.omega_min"));
  if (!(m.omega_min > 0.0))
    throw ConfigError("mesh.omega_min", "must be positive");
  put("mesh.omega_min", short_double(m.omega_min));
  if (get("mesh.omega_max") == "auto") {
    c.omega_max_auto = true;
    put("mesh.omega_max", "auto");
  } else {
    c.omega_max_auto = false;
    m.omega_max = to_double("mesh.omega_max", get("mesh.omega_max"));
    if (!(m.omega_max > m.omega_min))
      throw ConfigError("mesh.omega_max", "must exceed mesh.omega_min");
    put("mesh.omega_max", short_double(m.omega_max));
  }
  m.points_per_period =
      int(to_int("mesh.points_per_period", get("mesh.points_per_period")));
  if (m.points_per_period < 8)
    throw ConfigError("mesh.points_per_period", "must be at least 8");
  put("mesh.points_per_period", std::to_string(m.points_per_period));
  m.low_end_ratio = to_double("mesh.low_end_ratio", get("mesh.low_end_ratio"));
  if (!(m.low_end_ratio > 0.0 && m.low_end_ratio <= 1.0))
    throw ConfigError("mesh.low_end_ratio", "must lie in (0, 1]");
  put("mesh.low_end_ratio", short_double(m.low_end_ratio));
  m.refinement_target =
      to_double("mesh.refinement_target", get("mesh.refinement_target"));
  if (!(m.refinement_target > 0.0))
    throw ConfigError("mesh.refinement_target", "must be positive");
  put("mesh.refinement_target", short_double(m.refinement_target));
  m.max_doublings = int(to_int("mesh.max_doublings", get("mesh.max_doublings")));
  if (m.max_doublings < 0 || m.max_doublings > 8)
    throw ConfigError("mesh.max_doublings", "must lie in [0, 8]");
  put("mesh.max_doublings", std::to_string(m.max_doublings));
  if (get("mesh.l_max") == "auto") {
    c.l_max = -1;
  } else {
    c.l_max = int(to_int("mesh.l_max", get("mesh.l_max")));
    if (c.l_max < 0)
      throw ConfigError("mesh.l_max", "must be nonnegative");
  }
  put("mesh.l_max", c.l_max < 0 ? "auto" : std::to_string(c.l_max));
  m.r_det = c.r_det;

  auto &s = m.solver;
  s.step.rtol = to_double("solver.rtol", get("solver.rtol"));
  s.step.atol = to_double("solver.atol", get("solver.atol"));
  if (!(s.step.rtol > 0.0) || s.step.rtol >= 1.0)
    throw ConfigError("solver.rtol", "must lie in (0, 1)");
  if (!(s.step.atol >= 0.0))
    throw ConfigError("solver.atol", "must be nonnegative");
  const long steps = to_int("solver.max_steps", get("solver.max_steps"));
  if (steps < 100)
    throw ConfigError("solver.max_steps", "must be at least 100");
  s.step.max_steps = std::size_t(steps);
  s.potential_tol = to_double("solver.potential_tol", get("solver.potential_tol"));
  if (!(s.potential_tol > 0.0 && s.potential_tol < 1.0))
    throw ConfigError("solver.potential_tol", "must lie in (0, 1)");
  s.min_extent = to_double("solver.min_extent", get("solver.min_extent"));
  if (!(s.min_extent > 0.0))
    throw ConfigError("solver.min_extent", "must be positive");
  s.min_steps_per_wavelength = int(
      to_int("solver.steps_per_wavelength", get("solver.steps_per_wavelength")));
  if (s.min_steps_per_wavelength < 4)
    throw ConfigError("solver.steps_per_wavelength", "must be at least 4");
  s.spread_tol = to_double("solver.spread_tol", get("solver.spread_tol"));
  if (!(s.spread_tol > 0.0))
    throw ConfigError("solver.spread_tol", "must be positive");
  s.wkb_extraction = to_bool("solver.wkb_extraction", get("solver.wkb_extraction"));
  {
    const auto &v = get("solver.jump");
    if (v == "as_published")
      s.jump = JumpConvention::AsPublished;
    else if (v == "flux_conserving")
      s.jump = JumpConvention::FluxConserving;
    else
      throw ConfigError("solver.jump",
                        "expected as_published or flux_conserving");
    put("solver.jump", v);
  }
  put("solver.rtol", short_double(s.step.rtol));
  put("solver.atol", short_double(s.step.atol));
  put("solver.max_steps", std::to_string(steps));
  put("solver.potential_tol", short_double(s.potential_tol));
  put("solver.min_extent", short_double(s.min_extent));
  put("solver.steps_per_wavelength",
      std::to_string(s.min_steps_per_wavelength));
  put("solver.spread_tol", short_double(s.spread_tol));
  put("solver.wkb_extraction", s.wkb_extraction ? "true" : "false");

  c.response.quadrature.rel = to_double("quadrature.rtol", get("quadrature.rtol"));
  if (!(c.response.quadrature.rel > 0.0))
    throw ConfigError("quadrature.rtol", "must be positive");
  put("quadrature.rtol", short_double(c.response.quadrature.rel));

  c.modes_grid = parse_grid("modes.grid", get("modes.grid"));
  if (c.modes_grid.empty() ||
      *std::min_element(c.modes_grid.begin(), c.modes_grid.end()) <= 0.0)
    throw ConfigError("modes.grid", "frequencies must be positive");
  put("modes.grid", canonical_grid("modes.grid", get("modes.grid")));
  c.modes_l = int(to_int("modes.l", get("modes.l")));
  if (c.modes_l < 0)
    throw ConfigError("modes.l", "must be nonnegative");
  put("modes.l", std::to_string(c.modes_l));
  c.radii = parse_grid("radius_sweep.radii", get("radius_sweep.radii"));
  for (double r : c.radii)
    if (!(r > 2.0 * c.M))
      throw ConfigError("radius_sweep.radii", "every radius must exceed 2M");
  put("radius_sweep.radii", canonical_grid("radius_sweep.radii", get("radius_sweep.radii")));

  c.output_path = get("output.path");
  c.output_format = get("output.format");
  if (c.output_format != "csv" && c.output_format != "json")
    throw ConfigError("output.format", "expected csv or json");
  put("output.format", c.output_format);

  c.canonical.assign(canon.begin(), canon.end());
  return c;
}

SpacetimeModel RunConfig::spacetime_model() const {
  return spacetime == SpacetimeModel::Kind::Flat ? SpacetimeModel::flat()
                                                 : SpacetimeModel::shell(M, R);
}

SwitchingSpec RunConfig::switching_spec() const {
  switch (switching) {
  case SwitchingSpec::Kind::Gaussian:
    return SwitchingSpec::gaussian(sigma);
  case SwitchingSpec::Kind::Lorentzian:
    return SwitchingSpec::lorentzian(sigma);
  case SwitchingSpec::Kind::CompactBump:
    return SwitchingSpec::compact_bump(sigma, support_halfwidth, taper);
  }
  return SwitchingSpec::gaussian(sigma);
}

UnitSystem RunConfig::units() const {
  if (gap_unit == EnergyUnit::LocalHawking)
    return UnitSystem::local_hawking(spacetime_model(), blueshift);
  return UnitSystem::natural();
}

std::vector<double> RunConfig::natural_gaps() const {
  const auto u = units();
  std::vector<double> out;
  for (double g : gaps)
    out.push_back(u.to_natural(g, gap_unit));
  return out;
}

std::uint64_t config_fingerprint(const RunConfig &c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string &s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto &[k, v] : c.canonical) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  return h;
}

std::string fingerprint_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace shellqft
