#pragma once

#include "shellqft/config.hpp"
#include "shellqft/output.hpp"

#include <string>
#include <vector>

namespace shellqft {

inline constexpr const char *version = "1.0.0";

struct CommandOptions {
  unsigned threads = 1;
  std::string cache_dir; //!< empty: no mesh cache
  //! Fixed timestamp for reproducible tests; empty: current UTC time.
  std::string timestamp;
};

struct CommandResult {
  Table table;
  int exit_code = 0;
  std::vector<std::string> warnings;
};

//! Exit codes.
enum : int {
  exit_ok = 0,
  exit_validation_failure = 1,
  exit_config_error = 2,
  exit_numerical_failure = 3
};

CommandResult cmd_modes(const RunConfig &c, const CommandOptions &o);
CommandResult cmd_response(const RunConfig &c, const CommandOptions &o);
CommandResult cmd_radius_sweep(const RunConfig &c, const CommandOptions &o);
CommandResult cmd_validate(const RunConfig &c, const CommandOptions &o);

//! The `#` header shared by every output.
std::vector<std::string> provenance_header(const std::string &command,
                                           const RunConfig &c,
                                           const CommandOptions &o);

std::string render(const Table &t, const std::string &format);

} // namespace shellqft
