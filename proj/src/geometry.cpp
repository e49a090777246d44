#include "pzf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pzf {

TorusWindow::TorusWindow(double side_km) : side(side_km) {
  if (!(side > 0.0)) throw std::invalid_argument("TorusWindow: side must be positive");
}

Point2 TorusWindow::wrap(Point2 p) const {
  p.x = std::fmod(p.x, side);
  if (p.x < 0.0) p.x += side;
  p.y = std::fmod(p.y, side);
  if (p.y < 0.0) p.y += side;
  // fmod can round to exactly side
  if (p.x >= side) p.x = 0.0;
  if (p.y >= side) p.y = 0.0;
  return p;
}

double TorusWindow::distance(const Point2& a, const Point2& b) const {
  double dx = std::fabs(a.x - b.x);
  if (dx > side - dx) dx = side - dx;
  double dy = std::fabs(a.y - b.y);
  if (dy > side - dy) dy = side - dy;
  return std::hypot(dx, dy);
}

double torus_distance(const Point2& a, const Point2& b, const TorusWindow& w) {
  return w.distance(a, b);
}

void GeometryParams::validate() const {
  if (!(bs_density >= 0.0)) throw std::invalid_argument("bs_density must be >= 0");
  if (mobiles_per_bs < 1) throw std::invalid_argument("mobiles_per_bs must be >= 1");
  if (!(cell_radius > 0.0)) throw std::invalid_argument("cell_radius must be positive");
  if (nulling_radius < 0.0) throw std::invalid_argument("nulling_radius must be >= 0");
  // torus metric aliases any disk wider than half the window
  if (nulling_radius > 0.5 * window.side)
    throw std::invalid_argument("nulling_radius exceeds half the window side");
  if (cell_radius > 0.5 * window.side)
    throw std::invalid_argument("cell_radius exceeds half the window side");
}

std::vector<Point2> sample_hppp(double density, const TorusWindow& window, RngStream& rng) {
  const double mean = density * window.side * window.side;
  const std::uint64_t n = rng.poisson(mean);
  std::vector<Point2> pts(n);
  for (auto& p : pts) {
    p.x = rng.uniform() * window.side;
    p.y = rng.uniform() * window.side;
  }
  return pts;
}

std::vector<Point2> place_mobiles(const Point2& bs, PlacementMode mode, double cell_radius,
                                  int count, const TorusWindow& window, RngStream& rng) {
  std::vector<Point2> out(static_cast<std::size_t>(count));
  for (auto& p : out) {
    // CellEdge: r = R exactly. UniformDisk: area-uniform, CDF r^2/R^2.
    const double r =
        mode == PlacementMode::CellEdge ? cell_radius : cell_radius * std::sqrt(rng.uniform());
    const double t = 6.283185307179586476925286766559 * rng.uniform();
    p = window.wrap({bs.x + r * std::cos(t), bs.y + r * std::sin(t)});
  }
  return out;
}

NetworkRealization build_realization(const GeometryParams& params, std::uint64_t seed) {
  params.validate();

  NetworkRealization net;
  net.window = params.window;
  net.mobiles_per_bs = params.mobiles_per_bs;
  net.cell_radius = params.cell_radius;
  net.nulling_radius = params.nulling_radius;

  RngStream bs_rng(derive_seed(seed, stream::kBsProcess));
  net.bs_positions = sample_hppp(params.bs_density, params.window, bs_rng);

  const int n_bs = net.bs_count();
  const int m = params.mobiles_per_bs;
  net.mobiles.resize(n_bs);
  net.served_sets.resize(n_bs);
  for (int k = 0; k < n_bs; ++k) {
    RngStream mob_rng(derive_seed(seed, stream::kMobiles, static_cast<std::uint64_t>(k)));
    net.mobiles[k] = place_mobiles(net.bs_positions[k], params.placement, params.cell_radius, m,
                                   params.window, mob_rng);
    net.served_sets[k].resize(m);
    for (int j = 0; j < m; ++j) net.served_sets[k][j] = k * m + j;
  }

  net.serving_distance_km.resize(static_cast<std::size_t>(n_bs) * m);
  for (int k = 0; k < n_bs; ++k)
    for (int j = 0; j < m; ++j)
      net.serving_distance_km[k * m + j] =
          params.window.distance(net.mobiles[k][j], net.bs_positions[k]);

  // D_k = { i : r_{i,k} < D }, strict inequality
  net.nulled_sets.assign(n_bs, {});
  const double d = params.nulling_radius;
  if (d > 0.0) {
    for (int k = 0; k < n_bs; ++k) {
      auto& set = net.nulled_sets[k];
      for (int i = 0; i < net.mobile_count(); ++i) {
        if (params.window.distance(net.mobile_position(i), net.bs_positions[k]) < d)
          set.push_back(i);
      }
    }
  }
  return net;
}

}  // namespace pzf
