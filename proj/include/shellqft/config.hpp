#pragma once

#include "shellqft/geometry.hpp"
#include "shellqft/mode_mesh.hpp"
#include "shellqft/radial_modes.hpp"
#include "shellqft/response.hpp"
#include "shellqft/switching.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace shellqft {

/*!
  @brief Resolved run configuration.

  Text format: one `key = value` per line, `#` starts a comment. Keys are
  dotted paths (see config_keys()); every key has a default. Lists are comma
  separated; grids may also be written `start:stop:step` (inclusive).
*/
struct RunConfig {
  SpacetimeModel::Kind spacetime = SpacetimeModel::Kind::Shell;
  double M = 0.5;
  double R = 3.0;

  SwitchingSpec::Kind switching = SwitchingSpec::Kind::Gaussian;
  double sigma = 0.5;
  double support_halfwidth = 0.0; //!< 0: 5 sigma
  double taper = 0.1;

  double r_det = 0.0;
  std::vector<double> gaps; //!< in gap_unit
  EnergyUnit gap_unit = EnergyUnit::LocalHawking;
  bool blueshift = true;

  MeshOptions mesh;
  bool omega_max_auto = true;
  int l_max = -1; //!< -1: automatic
  ResponseOptions response;

  std::vector<double> modes_grid;
  int modes_l = 0;
  std::vector<double> radii;

  std::string output_path;
  std::string output_format = "csv";

  //! (key, normalised value) for every semantically meaningful key, sorted.
  std::vector<std::pair<std::string, std::string>> canonical;

  SpacetimeModel spacetime_model() const;
  SwitchingSpec switching_spec() const;
  UnitSystem units() const;
  //! Gaps converted to natural units.
  std::vector<double> natural_gaps() const;
};

struct ConfigKey {
  const char *name;
  const char *default_value;
  bool semantic; //!< part of the fingerprint
  const char *help;
};
const std::vector<ConfigKey> &config_keys();

//! key -> raw value; later sources override earlier ones.
using RawConfig = std::map<std::string, std::string>;

//! Parse the text format. Unknown keys and malformed lines throw ConfigError.
RawConfig parse_config_text(const std::string &text,
                            const std::string &source = "config");
RawConfig read_config_file(const std::string &path);
//! Set one key (rejecting unknown ones).
void set_config_value(RawConfig &raw, const std::string &key,
                      const std::string &value);

//! Apply defaults, type-check and validate. First failure throws ConfigError.
RunConfig resolve_config(const RawConfig &raw);

//! FNV-1a 64 over the canonical key/value lines.
std::uint64_t config_fingerprint(const RunConfig &c);
std::string fingerprint_hex(std::uint64_t h);

//! Canonical formatting of a double (17 significant digits).
std::string format_double(double v);

//! Expand "a:b:step" or "x,y,z".
std::vector<double> parse_grid(const std::string &key, const std::string &text);

} // namespace shellqft
