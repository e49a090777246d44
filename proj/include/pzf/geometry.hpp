#pragma once

#include <cstdint>
#include <vector>

#include "pzf/rng.hpp"

namespace pzf {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Square simulation window with opposite edges identified. All stored
// coordinates live in [0, side)^2; the metric is the shortest wrapped
// displacement, so distances never exceed side/sqrt(2).
struct TorusWindow {
  double side;

  explicit TorusWindow(double side_km);

  Point2 wrap(Point2 p) const;
  double distance(const Point2& a, const Point2& b) const;
};

double torus_distance(const Point2& a, const Point2& b, const TorusWindow& w);

enum class PlacementMode { CellEdge, UniformDisk };

struct GeometryParams {
  TorusWindow window;
  double bs_density = 30.0;     // BS per km^2
  int mobiles_per_bs = 3;       // M
  double cell_radius = 0.15;    // R, km
  double nulling_radius = 0.0;  // D, km
  PlacementMode placement = PlacementMode::UniformDisk;

  void validate() const;
};

// One sampled network: BS point process, per-BS mobiles, and the derived
// neighbor sets. Immutable after construction; safe to share across threads.
struct NetworkRealization {
  TorusWindow window{1.0};
  int mobiles_per_bs = 0;
  double cell_radius = 0.0;
  double nulling_radius = 0.0;

  std::vector<Point2> bs_positions;
  std::vector<std::vector<Point2>> mobiles;    // [bs][m]
  std::vector<std::vector<int>> nulled_sets;   // D_k as sorted global mobile ids
  std::vector<std::vector<int>> served_sets;   // M_k as global mobile ids
  std::vector<double> serving_distance_km;     // per global mobile id

  int bs_count() const { return static_cast<int>(bs_positions.size()); }
  int mobile_count() const { return bs_count() * mobiles_per_bs; }
  int serving_bs(int mobile_id) const { return mobile_id / mobiles_per_bs; }
  const Point2& mobile_position(int mobile_id) const {
    return mobiles[mobile_id / mobiles_per_bs][mobile_id % mobiles_per_bs];
  }
};

std::vector<Point2> sample_hppp(double density, const TorusWindow& window, RngStream& rng);

std::vector<Point2> place_mobiles(const Point2& bs, PlacementMode mode, double cell_radius,
                                  int count, const TorusWindow& window, RngStream& rng);

// Pure function of (params, seed).
NetworkRealization build_realization(const GeometryParams& params, std::uint64_t seed);

}  // namespace pzf
