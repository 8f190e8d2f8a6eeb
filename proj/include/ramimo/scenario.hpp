#pragma once

#include <cmath>
#include <vector>

#include "config.hpp"
#include "rng.hpp"

namespace ramimo {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline double distance_2d(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_3d(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

/// Node positions of one drop. Sites host either a repeater (RA-MIMO) or a
/// single-antenna access point (D-MIMO); the geometry is the same for both.
struct Deployment {
  Point3 bs_position;
  std::vector<Point3> site_positions;
  std::vector<Point3> user_positions;
};

/// Square mesh of `num_sites` points: centres of a sqrt(N) x sqrt(N) tiling
/// of the area, i.e. pitch p = area/sqrt(N) with a p/2 margin to the edges.
/// Site (i, j) is stored at index i * side + j.
inline std::vector<Point3> site_mesh(const ScenarioConfig& cfg) {
  const int side = cfg.mesh_side();
  const double pitch = cfg.area_side / side;
  const double z = cfg.terminal_height + cfg.site_height_above_terminal;
  std::vector<Point3> sites;
  sites.reserve(static_cast<std::size_t>(cfg.num_sites));
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      sites.push_back({(i + 0.5) * pitch, (j + 0.5) * pitch, z});
    }
  }
  return sites;
}

/// BS and site mesh are fixed; users are uniform over the square, drawn from
/// the drop's user stream.
inline Deployment build_deployment(const ScenarioConfig& cfg, RandomStream& rng) {
  Deployment d;
  d.bs_position = {cfg.area_side / 2.0, cfg.area_side / 2.0, cfg.bs_height};
  d.site_positions = site_mesh(cfg);
  d.user_positions.reserve(static_cast<std::size_t>(cfg.num_users));
  for (int k = 0; k < cfg.num_users; ++k) {
    const double x = rng.uniform() * cfg.area_side;
    const double y = rng.uniform() * cfg.area_side;
    d.user_positions.push_back({x, y, cfg.terminal_height});
  }
  return d;
}

/// Deployment of drop `drop_index` under the campaign seed.
inline Deployment build_deployment(const ScenarioConfig& cfg, std::uint64_t drop_index) {
  RandomStream rng(cfg.seed, drop_index, StreamTag::users);
  return build_deployment(cfg, rng);
}

}  // namespace ramimo
