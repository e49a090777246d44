#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pzf/geometry.hpp"

using namespace pzf;

namespace {

// mean and variance of a sample against targets, tolerance in standard errors
void check_moments(const std::vector<double>& xs, double mean, double var, double var_of_var) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= n - 1.0;
  CHECK(std::fabs(m - mean) <= 3.0 * std::sqrt(var / n));
  CHECK(std::fabs(v - var) <= 3.0 * std::sqrt(var_of_var / n));
}

GeometryParams small_params() {
  GeometryParams p{TorusWindow(5.7735)};  // ~33.3 km^2
  p.bs_density = 30.0;
  p.mobiles_per_bs = 3;
  p.cell_radius = 0.15;
  p.nulling_radius = 0.25;
  p.placement = PlacementMode::UniformDisk;
  return p;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("torus distance wraps around edges") {
    TorusWindow w(10.0);
    CHECK(torus_distance({1, 1}, {9, 1}, w) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(torus_distance({3, 4}, {3, 4}, w) == 0.0);
    CHECK(torus_distance({0, 0}, {5, 5}, w) == doctest::Approx(std::sqrt(50.0)).epsilon(1e-12));
  }

  TEST_CASE("torus distance is symmetric and bounded") {
    TorusWindow w(7.0);
    RngStream rng(99);
    const double bound = 7.0 * std::sqrt(2.0) / 2.0 + 1e-12;
    for (int i = 0; i < 500; ++i) {
      Point2 p{rng.uniform() * 7.0, rng.uniform() * 7.0};
      Point2 q{rng.uniform() * 7.0, rng.uniform() * 7.0};
      const double d = torus_distance(p, q, w);
      CHECK(d == torus_distance(q, p, w));
      CHECK(d <= bound);
    }
  }

  TEST_CASE("hppp count is Poisson with the right mean and variance") {
    TorusWindow w(2.0);
    std::vector<double> counts;
    for (int i = 0; i < 10000; ++i) {
      RngStream rng(derive_seed(7, i));
      counts.push_back(static_cast<double>(sample_hppp(30.0, w, rng).size()));
    }
    // Poisson(120): var of the sample variance ~ lambda + 2 lambda^2
    check_moments(counts, 120.0, 120.0, 120.0 + 2.0 * 120.0 * 120.0);
  }

  TEST_CASE("hppp edge cases") {
    TorusWindow w(3.0);
    RngStream rng(1);
    CHECK(sample_hppp(0.0, w, rng).empty());

    RngStream a(42), b(42);
    const auto pa = sample_hppp(10.0, w, a);
    const auto pb = sample_hppp(10.0, w, b);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      CHECK(pa[i].x == pb[i].x);
      CHECK(pa[i].y == pb[i].y);
    }
    for (const auto& p : pa) {
      CHECK(p.x >= 0.0);
      CHECK(p.x < 3.0);
      CHECK(p.y >= 0.0);
      CHECK(p.y < 3.0);
    }
  }

  TEST_CASE("cell-edge placement puts every mobile at distance R") {
    TorusWindow w(4.0);
    RngStream rng(5);
    const Point2 bs{1.0, 3.9};  // near the wrap seam on purpose
    const auto mob = place_mobiles(bs, PlacementMode::CellEdge, 0.15, 3, w, rng);
    REQUIRE(mob.size() == 3);
    for (const auto& m : mob)
      CHECK(torus_distance(m, bs, w) == doctest::Approx(0.15).epsilon(1e-12));
  }

  TEST_CASE("uniform-disk placement has mean distance 2R/3") {
    TorusWindow w(4.0);
    RngStream rng(6);
    const Point2 bs{2.0, 2.0};
    const double r = 0.15;
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; i += 10) {
      for (const auto& m : place_mobiles(bs, PlacementMode::UniformDisk, r, 10, w, rng))
        acc += torus_distance(m, bs, w);
    }
    CHECK(acc / n == doctest::Approx(2.0 * r / 3.0).epsilon(0.01));
  }

  TEST_CASE("degenerate disk collapses onto the BS") {
    TorusWindow w(4.0);
    RngStream rng(7);
    const Point2 bs{1.0, 1.0};
    const auto mob = place_mobiles(bs, PlacementMode::UniformDisk, 1e-9, 1, w, rng);
    CHECK(torus_distance(mob[0], bs, w) <= 1e-9);
  }

  TEST_CASE("realization mobile count tracks lambda_b * M") {
    auto p = small_params();
    std::vector<double> totals;
    for (int i = 0; i < 300; ++i)
      totals.push_back(
          static_cast<double>(build_realization(p, derive_seed(11, i)).mobile_count()));
    double m = 0.0;
    for (double t : totals) m += t;
    m /= totals.size();
    const double expect = 30.0 * p.window.side * p.window.side * 3.0;
    const double sd = std::sqrt(30.0 * p.window.side * p.window.side) * 3.0;
    CHECK(std::fabs(m - expect) <= 3.0 * sd / std::sqrt(static_cast<double>(totals.size())));
  }

  TEST_CASE("nulled sets reconstruct the strict-inequality definition") {
    auto p = small_params();
    const auto net = build_realization(p, 1234);
    REQUIRE(net.bs_count() > 0);
    for (int k = 0; k < net.bs_count(); ++k) {
      std::vector<int> expect;
      for (int i = 0; i < net.mobile_count(); ++i)
        if (torus_distance(net.mobile_position(i), net.bs_positions[k], net.window) <
            p.nulling_radius)
          expect.push_back(i);
      CHECK(net.nulled_sets[k] == expect);
      CHECK(static_cast<int>(net.served_sets[k].size()) == p.mobiles_per_bs);
    }
  }

  TEST_CASE("D = 0 leaves every nulled set empty") {
    auto p = small_params();
    p.nulling_radius = 0.0;
    const auto net = build_realization(p, 99);
    for (const auto& set : net.nulled_sets) CHECK(set.empty());
  }

  TEST_CASE("D >= R implies served mobiles are inside their own nulled set") {
    auto p = small_params();
    p.nulling_radius = 0.2;  // > R = 0.15
    const auto net = build_realization(p, 77);
    for (int k = 0; k < net.bs_count(); ++k)
      for (int id : net.served_sets[k])
        CHECK(std::binary_search(net.nulled_sets[k].begin(), net.nulled_sets[k].end(), id));
  }

  TEST_CASE("build_realization is deterministic and validates D") {
    auto p = small_params();
    const auto a = build_realization(p, 4321);
    const auto b = build_realization(p, 4321);
    REQUIRE(a.bs_count() == b.bs_count());
    for (int k = 0; k < a.bs_count(); ++k) {
      CHECK(a.bs_positions[k].x == b.bs_positions[k].x);
      CHECK(a.nulled_sets[k] == b.nulled_sets[k]);
    }
    for (std::size_t i = 0; i < a.serving_distance_km.size(); ++i)
      CHECK(a.serving_distance_km[i] == b.serving_distance_km[i]);

    p.nulling_radius = 3.0;  // > side/2
    CHECK_THROWS_AS(build_realization(p, 1), std::invalid_argument);
  }

  TEST_CASE("serving distances never exceed R") {
    auto p = small_params();
    const auto net = build_realization(p, 2024);
    for (double d : net.serving_distance_km) CHECK(d <= p.cell_radius * (1.0 + 1e-12));
  }
}
