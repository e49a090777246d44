#include <doctest.h>

#include <cmath>

#include "pzf/powerctl.hpp"

using namespace pzf;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rate_of(const std::vector<double>& gains, const std::vector<double>& powers) {
  double acc = 0.0;
  for (std::size_t m = 0; m < gains.size(); ++m) acc += std::log2(1.0 + gains[m] * powers[m]);
  return acc;
}

// simplex grid search for max sum log2(1 + gain_m p_m) subject to sum p = P,
// refined around the incumbent; independent of the water-filling identities
double grid_oracle_rate(const std::vector<double>& gains, double peak) {
  const int m = static_cast<int>(gains.size());
  REQUIRE(m >= 2);
  REQUIRE(m <= 3);
  double best = -1.0;
  double c0 = peak / 2.0, c1 = peak / 2.0, span = peak / 2.0;
  for (int round = 0; round < 6; ++round) {
    const int steps = 60;
    double round_best = -1.0, b0 = c0, b1 = c1;
    for (int i = 0; i <= steps; ++i) {
      const double p0 = std::clamp(c0 - span + 2.0 * span * i / steps, 0.0, peak);
      if (m == 2) {
        const double p1 = peak - p0;
        if (p1 < 0.0) continue;
        const double r = rate_of(gains, {p0, p1});
        if (r > round_best) {
          round_best = r;
          b0 = p0;
        }
      } else {
        for (int j = 0; j <= steps; ++j) {
          const double p1 = std::clamp(c1 - span + 2.0 * span * j / steps, 0.0, peak);
          const double p2 = peak - p0 - p1;
          if (p2 < 0.0) continue;
          const double r = rate_of(gains, {p0, p1, p2});
          if (r > round_best) {
            round_best = r;
            b0 = p0;
            b1 = p1;
          }
        }
      }
    }
    best = round_best;
    c0 = b0;
    c1 = b1;
    span = span * 4.0 / steps;
  }
  return best;
}

std::vector<double> random_gains(int m, RngStream& rng) {
  std::vector<double> g(m);
  for (auto& v : g) v = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
  return g;
}

AsymptoticParams fig4_params(double l_noise_scale) {
  AsymptoticParams p;
  p.lambda_b = 60.0;
  p.mobiles_per_bs = 3;
  p.alpha = 3.0;
  p.s = 0.024278854013157315;  // optimal scale at mu = 0
  p.mu = l_noise_scale;
  p.zeta = 0.5;
  p.mean_power = 1.0;
  p.peak_power = 1.0;
  p.cell_radius = 0.15;
  return p;
}

}  // namespace

TEST_SUITE("powerctl") {
  TEST_CASE("g factor: scaling behavior and a pinned reference") {
    auto p = fig4_params(0.0);
    CHECK(g_factor(p, 10, 2.0) == doctest::Approx(0.5 * g_factor(p, 10, 1.0)).epsilon(1e-12));
    p.mu = 1e12;
    CHECK(g_factor(p, 10, 1.0) < 1e-9);

    // Fig-4 style reference, written out from scratch: sigma2 from a 25 dB
    // cell edge SNR, mu = sigma2 sqrt(L)
    const double sigma2 = std::pow(0.15, -3.0) / std::pow(10.0, 2.5);
    const double mu = sigma2 * std::sqrt(10.0);
    auto q = fig4_params(mu);
    const double s = 0.024278854013157315;
    const double expect = std::pow(10.0, 1.5) * (1.0 - s * s * kPi * 60.0 * 3.0) /
                          ((1.0 / s) * 2.0 * kPi * 1.0 * 60.0 / (3.0 - 2.0) + mu);
    CHECK(g_factor(q, 10, 1.0) == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("water-filling candidate") {
    WaterfillProblem prob{{1.0, 1.0}, 10.0};
    CHECK(waterfill_candidate(2.0, prob) == std::vector<double>{1.0, 1.0});
    WaterfillProblem fade{{1.0, 1e-6}, 10.0};
    const auto powers = waterfill_candidate(2.0, fade);
    CHECK(powers[0] == doctest::Approx(1.0));
    CHECK(powers[1] == 0.0);
    WaterfillProblem low{{0.5, 0.25}, 10.0};
    CHECK(waterfill_candidate(2.0, low) == std::vector<double>{0.0, 0.0});
  }

  TEST_CASE("mean power curve: endpoints and the cell-edge closed form") {
    const DistanceSampleSet edge =
        sample_distance_tuples(PlacementMode::CellEdge, 0.15, 3, 50, 1);
    const double g = std::pow(0.15, 3.0);  // cost = R^alpha / g = 1 at alpha = 3
    CHECK(mean_power_curve(0.0, edge, g, 3.0, 2.0) == 0.0);
    CHECK(mean_power_curve(1e9, edge, g, 3.0, 2.0) == 2.0);
    for (double level : {1.2, 1.5, 1.9}) {
      const double expect = std::min(2.0, 3.0 * std::max(0.0, level - 1.0));
      CHECK(mean_power_curve(level, edge, g, 3.0, 2.0) == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  TEST_CASE("solve_level: cell-edge example and monotonicity") {
    const DistanceSampleSet edge =
        sample_distance_tuples(PlacementMode::CellEdge, 0.15, 1, 20, 1);
    const double g = std::pow(0.15, 3.0);  // unit cost
    const double level = solve_level(0.5, edge, g, 3.0, 1.0);
    CHECK(level == doctest::Approx(1.5).epsilon(1e-8));

    const DistanceSampleSet disk =
        sample_distance_tuples(PlacementMode::UniformDisk, 0.15, 3, 4000, 7);
    const double g2 = 2000.0;
    double prev = 0.0;
    for (double target : {0.2, 0.5, 0.9, 1.0}) {
      const double lvl = solve_level(target, disk, g2, 3.0, 1.0);
      CHECK(lvl >= prev);
      CHECK(std::fabs(mean_power_curve(lvl, disk, g2, 3.0, 1.0) - target) <= 1e-9);
      prev = lvl;
    }
    CHECK_THROWS_AS(solve_level(1.5, disk, g2, 3.0, 1.0), InfeasibleTarget);
  }

  TEST_CASE("allocate: clipping branch") {
    WaterfillProblem sym{{1.0, 1.0}, 2.0};
    const auto clipped = allocate(1e9, sym);
    CHECK(clipped[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(clipped[1] == doctest::Approx(1.0).epsilon(1e-12));

    WaterfillProblem prob{{3.0, 0.7}, 1.5};
    const auto un = allocate(0.9, prob);  // sum of candidates < P
    const auto cand = waterfill_candidate(0.9, prob);
    CHECK(un == cand);
  }

  TEST_CASE("allocate matches the simplex grid oracle when clipped") {
    RngStream rng(515);
    for (int rep = 0; rep < 25; ++rep) {
      for (int m : {2, 3}) {
        WaterfillProblem prob{random_gains(m, rng), 1.0};
        const auto powers = allocate(1e9, prob);  // force the peak branch
        double sum = 0.0;
        for (double v : powers) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        const double rate = rate_of(prob.gains, powers);
        const double oracle = grid_oracle_rate(prob.gains, 1.0);
        CHECK(rate >= oracle - 1e-3 * std::fabs(oracle));
        CHECK(rate <= oracle + 1e-3 * std::fabs(oracle) + 1e-9);
      }
    }
  }

  TEST_CASE("KKT water property on random problems") {
    RngStream rng(616);
    for (int rep = 0; rep < 200; ++rep) {
      const int m = 2 + static_cast<int>(rng.uniform() * 3);
      WaterfillProblem prob{random_gains(m, rng), 1.0};
      const double level_in = 0.2 + 3.0 * rng.uniform();
      const auto powers = allocate(level_in, prob);
      double sum = 0.0;
      for (double v : powers) sum += v;
      CHECK(sum <= 1.0 + 1e-9);
      // effective level: the input one, or the inner level when clipped
      double level = level_in;
      const auto cand = waterfill_candidate(level_in, prob);
      double cand_sum = 0.0;
      for (double v : cand) cand_sum += v;
      if (cand_sum > 1.0) {
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        // recover gamma from any active entry
        for (int i = 0; i < m; ++i)
          if (powers[i] > 0.0) {
            level = powers[i] + 1.0 / prob.gains[i];
            break;
          }
      }
      for (int i = 0; i < m; ++i) {
        const double cost = 1.0 / prob.gains[i];
        if (powers[i] > 0.0)
          CHECK(std::fabs(level - powers[i] - cost) <= 1e-9);
        else
          CHECK(cost >= level - 1e-9);
      }
    }
  }

  TEST_CASE("mean-power consistency on the solving sample set") {
    const DistanceSampleSet disk =
        sample_distance_tuples(PlacementMode::UniformDisk, 0.15, 3, 30000, 12);
    auto p = fig4_params(2.0);
    const PowerPolicyResult res = solve_waterfill_policy(p, 16, disk, 0.8);
    WaterfillProblem prob{{0, 0, 0}, 1.0};
    double acc = 0.0;
    for (int i = 0; i < disk.samples(); ++i) {
      for (int m = 0; m < 3; ++m)
        prob.gains[m] = res.g * std::pow(disk.distance_km[i * 3 + m], -3.0);
      const auto powers = allocate(res.level, prob);
      for (double v : powers) acc += v;
    }
    CHECK(std::fabs(acc / disk.samples() - 0.8) <= 1e-6 * 1.0);
  }

  TEST_CASE("waterfilling dominates equal power per sample at full budget") {
    const DistanceSampleSet disk =
        sample_distance_tuples(PlacementMode::UniformDisk, 0.15, 3, 2000, 21);
    auto p = fig4_params(2.0);
    const PowerPolicyResult res = solve_waterfill_policy(p, 16, disk, 1.0);
    WaterfillProblem prob{{0, 0, 0}, 1.0};
    const auto eq = equal_power(3, 1.0);
    for (int i = 0; i < disk.samples(); ++i) {
      for (int m = 0; m < 3; ++m)
        prob.gains[m] = res.g * std::pow(disk.distance_km[i * 3 + m], -3.0);
      const auto powers = allocate(res.level, prob);
      // at target Pbar = P every tuple sits at the clipping knee
      double sum = 0.0;
      for (double v : powers) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(rate_of(prob.gains, powers) >= rate_of(prob.gains, eq) - 1e-9);
    }
  }

  TEST_CASE("outer search: optimality against endpoints and a dense grid") {
    auto p = fig4_params(0.937 * std::sqrt(10.0));
    const int l = 10;
    const PowerPolicyResult best =
        optimize_mean_power(p, l, PlacementMode::CellEdge, 64, 3);
    CHECK(best.mean_power > 0.0);
    CHECK(best.mean_power <= 1.0);

    const DistanceSampleSet edge = sample_distance_tuples(PlacementMode::CellEdge, 0.15, 3, 64, 3);
    CHECK(best.rate >= solve_waterfill_policy(p, l, edge, 1.0).rate - 1e-9);
    CHECK(best.rate >= solve_waterfill_policy(p, l, edge, 0.5).rate - 1e-9);

    // dense scan of the scalar problem
    double grid_best = 0.0, grid_arg = 0.0;
    for (int i = 1; i <= 4000; ++i) {
      const double pbar = i / 4000.0;
      const double r = solve_waterfill_policy(p, l, edge, pbar).rate;
      if (r > grid_best) {
        grid_best = r;
        grid_arg = pbar;
      }
    }
    CHECK(best.rate >= grid_best - 1e-4 * std::fabs(grid_best));
    CHECK(std::fabs(best.mean_power - grid_arg) <= 2e-3);
  }

  TEST_CASE("equal power baseline") {
    const auto powers = equal_power(3, 1.0);
    for (double v : powers) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    double sum = 0.0;
    for (double v : powers) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  }
}
