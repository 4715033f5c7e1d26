#include "shellqft/mesh_cache.hpp"
#include "shellqft/config.hpp"
#include "shellqft/errors.hpp"
#include "shellqft/special_functions.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace shellqft {

namespace {

class FileLock {
public:
  explicit FileLock(const std::string &path) {
    m_fd = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
    if (m_fd < 0)
      throw ConfigError("--cache", "cannot open lock file '" + path + "'");
    ::flock(m_fd, LOCK_EX);
  }
  ~FileLock() {
    ::flock(m_fd, LOCK_UN);
    ::close(m_fd);
  }
  FileLock(const FileLock &) = delete;
  FileLock &operator=(const FileLock &) = delete;

private:
  int m_fd = -1;
};

std::uint64_t fnv(const std::string &s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

MeshCache::MeshCache(std::string dir) : m_dir(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(m_dir, ec);
  if (ec)
    throw ConfigError("--cache", "cannot create '" + m_dir + "'");
}

std::string MeshCache::key_text(const SpacetimeModel &s, int l,
                                const MeshOptions &o) {
  std::ostringstream k;
  const auto &v = o.solver;
  k << "format=1";
  if (s.is_flat())
    k << ";flat";
  else
    k << ";M=" << format_double(s.mass()) << ";R=" << format_double(*s.radius());
  k << ";l=" << l << ";r_det=" << format_double(o.r_det)
    << ";omega_min=" << format_double(o.omega_min)
    << ";omega_max=" << format_double(o.omega_max)
    << ";ppp=" << o.points_per_period
    << ";low_end_ratio=" << format_double(o.low_end_ratio)
    << ";flat_spacing=" << format_double(o.flat_spacing)
    << ";target=" << format_double(o.refinement_target)
    << ";doublings=" << o.max_doublings << ";check=" << o.check_refinement
    << ";rtol=" << format_double(v.step.rtol)
    << ";atol=" << format_double(v.step.atol)
    << ";max_steps=" << v.step.max_steps
    << ";potential_tol=" << format_double(v.potential_tol)
    << ";min_extent=" << format_double(v.min_extent)
    << ";spw=" << v.min_steps_per_wavelength
    << ";samples=" << v.extraction_samples
    << ";spread_tol=" << format_double(v.spread_tol)
    << ";wkb=" << v.wkb_extraction << ";analytic_flat=" << v.analytic_flat
    << ";flat_R=" << format_double(v.flat_matching_radius)
    << ";seed=" << format_double(v.seed_scale)
    << ";jump=" << (v.jump == JumpConvention::AsPublished ? "as_published"
                                                          : "flux_conserving");
  return k.str();
}

std::string MeshCache::path_for(const SpacetimeModel &s, int l,
                                const MeshOptions &opt) const {
  return m_dir + "/mesh-" + fingerprint_hex(fnv(key_text(s, l, opt))) + ".txt";
}

std::string serialise_mesh(const ModeMesh &m, const std::string &key) {
  std::ostringstream out;
  out << "# key " << key << '\n';
  out << "# l " << m.l << '\n';
  out << "# r_det " << format_double(m.r_det) << '\n';
  out << "# analytic " << int(m.analytic) << '\n';
  out << "# shell_radius " << format_double(m.shell_radius) << '\n';
  out << "# mass " << format_double(m.mass) << '\n';
  out << "# refinement_error " << format_double(m.refinement_error) << '\n';
  out << "omega_local,amp_sq,amp_err,weight\n";
  for (std::size_t i = 0; i < m.grid.size(); ++i)
    out << format_double(m.grid[i]) << ',' << format_double(m.amp_sq[i])
        << ',' << format_double(m.amp_err[i]) << ','
        << format_double(m.weight[i]) << '\n';
  return out.str();
}

ModeMesh deserialise_mesh(const std::string &text, const std::string &key) {
  ModeMesh m;
  std::stringstream ss(text);
  std::string line;
  bool key_ok = false, columns = false;
  auto bad = [](const std::string &why) {
    return NumericalError("mesh cache file unusable: " + why);
  };
  while (std::getline(ss, line)) {
    if (line.rfind("# ", 0) == 0) {
      std::stringstream ls(line.substr(2));
      std::string name, value;
      ls >> name;
      std::getline(ls >> std::ws, value);
      if (name == "key")
        key_ok = value == key;
      else if (name == "l")
        m.l = std::stoi(value);
      else if (name == "r_det")
        m.r_det = std::stod(value);
      else if (name == "analytic")
        m.analytic = value == "1";
      else if (name == "shell_radius")
        m.shell_radius = std::stod(value);
      else if (name == "mass")
        m.mass = std::stod(value);
      else if (name == "refinement_error")
        m.refinement_error = std::stod(value);
      continue;
    }
    if (!columns) {
      columns = true;
      continue;
    }
    if (line.empty())
      continue;
    double v[4];
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2],
                    &v[3]) != 4)
      throw bad("malformed row");
    m.grid.push_back(v[0]);
    m.amp_sq.push_back(v[1]);
    m.amp_err.push_back(v[2]);
    m.weight.push_back(v[3]);
  }
  if (!key_ok)
    throw bad("key mismatch");
  if (m.grid.size() < 4)
    throw bad("too few rows");
  if (!m.analytic)
    m.rebuild_interpolant();
  if (m.r_det > 0.0) {
    m.mode_at_r.resize(m.grid.size());
    for (std::size_t i = 0; i < m.grid.size(); ++i) {
      const double j = sph_bessel_j(m.l, m.grid[i] * m.r_det);
      m.mode_at_r[i] = m.amp_sq[i] * m.r_det * m.r_det * j * j;
    }
  }
  return m;
}

ModeMesh MeshCache::get_or_build(const SpacetimeModel &s, int l,
                                 const MeshOptions &opt) {
  const std::string key = key_text(s, l, opt);
  const std::string path = path_for(s, l, opt);
  FileLock lock(path.substr(0, path.size() - 4) + ".lock");
  {
    std::ifstream in(path);
    if (in) {
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        auto m = deserialise_mesh(ss.str(), key);
        ++m_hits;
        return m;
      } catch (const NumericalError &) {
        // fall through and rebuild
      }
    }
  }
  ++m_misses;
  auto m = build_mode_mesh(s, l, opt);
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    out << serialise_mesh(m, key);
    if (!out)
      throw ConfigError("--cache", "cannot write '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
  return m;
}

} // namespace shellqft
