#pragma once

#include "shellqft/mode_mesh.hpp"

#include <string>

namespace shellqft {

/*!
  @brief Directory of mode meshes keyed by everything that determines them.

  File `mesh-<key>.txt`: `#` lines with the key, M, R, l, r_det, solver and
  mesh settings and the refinement error, then rows
  `omega_local,amp_sq,amp_err,weight` at 17 significant digits. Concurrent
  processes serialise on an advisory lock (`mesh-<key>.lock`); files are
  written to a temporary name and renamed into place.
*/
class MeshCache {
public:
  explicit MeshCache(std::string dir);

  //! Cached mesh, or build_mode_mesh(s, l, opt) stored for next time.
  ModeMesh get_or_build(const SpacetimeModel &s, int l, const MeshOptions &opt);

  //! Key text covering every input of build_mode_mesh.
  static std::string key_text(const SpacetimeModel &s, int l,
                              const MeshOptions &opt);
  std::string path_for(const SpacetimeModel &s, int l,
                       const MeshOptions &opt) const;

  std::size_t hits() const { return m_hits; }
  std::size_t misses() const { return m_misses; }

private:
  std::string m_dir;
  std::size_t m_hits = 0;
  std::size_t m_misses = 0;
};

std::string serialise_mesh(const ModeMesh &m, const std::string &key);
//! Throws NumericalError on a malformed file.
ModeMesh deserialise_mesh(const std::string &text, const std::string &key);

} // namespace shellqft
