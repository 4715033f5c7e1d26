#include "shellqft/commands.hpp"
#include "shellqft/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

using namespace shellqft;

namespace {

// remaining "--key value" / "--key=value" pairs become config overrides
void apply_overrides(RawConfig &raw, const std::vector<std::string> &extra) {
  for (std::size_t i = 0; i < extra.size(); ++i) {
    std::string a = extra[i];
    if (a.rfind("--", 0) != 0)
      throw ConfigError(a, "expected --key value");
    a = a.substr(2);
    const auto eq = a.find('=');
    if (eq != std::string::npos) {
      set_config_value(raw, a.substr(0, eq), a.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extra.size())
      throw ConfigError(a, "missing value");
    set_config_value(raw, a, extra[++i]);
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Response of a static detector inside a thin massive shell "
               "compared with flat space"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  std::string config_path, out_path, cache_dir;
  unsigned threads = 1;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "configuration file");
    sub->add_option("--out", out_path, "output file (default: output.path or stdout)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cache", cache_dir, "mode mesh cache directory");
    sub->allow_extras();
    sub->footer("Any configuration key can be overridden as --key value, "
                "e.g. --spacetime.R 5 --switching.sigma 0.2.");
  };
  auto *modes = app.add_subcommand("modes", "tabulate |A|^2 for shell and flat space");
  auto *response = app.add_subcommand("response", "response function over a gap grid");
  auto *sweep = app.add_subcommand("radius-sweep", "centre response against shell radius");
  auto *validate = app.add_subcommand("validate", "run the validation suites");
  for (auto *s : {modes, response, sweep, validate})
    add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config_error;
  }

  CLI::App *sub = app.get_subcommands().front();
  try {
    RawConfig raw;
    if (!config_path.empty())
      raw = read_config_file(config_path);
    apply_overrides(raw, sub->remaining());
    const RunConfig cfg = resolve_config(raw);
    CommandOptions opt;
    opt.threads = threads;
    opt.cache_dir = cache_dir;

    CommandResult res;
    const std::string name = sub->get_name();
    if (name == "modes")
      res = cmd_modes(cfg, opt);
    else if (name == "response")
      res = cmd_response(cfg, opt);
    else if (name == "radius-sweep")
      res = cmd_radius_sweep(cfg, opt);
    else
      res = cmd_validate(cfg, opt);

    for (const auto &w : res.warnings)
      std::cerr << "warning: " << w << '\n';
    const std::string path = out_path.empty() ? cfg.output_path : out_path;
    write_text(path, render(res.table, cfg.output_format));
    return res.exit_code;
  } catch (const ConfigError &e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const DomainError &e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical_failure;
  } catch (const std::exception &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical_failure;
  }
}
