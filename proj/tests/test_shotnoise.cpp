#include <doctest.h>

#include <cmath>

#include "pzf/shotnoise.hpp"

using namespace pzf;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("shotnoise") {
  TEST_CASE("bound: analytic exponential fixture") {
    // f1 = f2 = e^-r, q = 1, lambda = 1: (2 pi)^2 + 2 pi / 4
    const auto spec = independent_exponential_fixture(1.0, 30.0);
    const BoundResult res = joint_moment_bound(spec);
    CHECK(res.value == doctest::Approx(41.04921393115233).epsilon(1e-7));
    CHECK(res.tail_estimate < 1e-8);
  }

  TEST_CASE("bound: zero envelopes give zero") {
    const auto spec = zero_mark_fixture(1.0, 30.0);
    CHECK(joint_moment_bound(spec).value == 0.0);
  }

  TEST_CASE("bound: truncated power-law fixture matches the closed form") {
    const double lambda_b = 0.3, alpha = 4.0, d = 0.6, pbar = 1.0, peak = 1.0;
    const auto spec = pzf_power_fixture(lambda_b, alpha, d, pbar, peak, 600.0);
    const BoundResult res = joint_moment_bound(spec);
    const double mean_term = 2.0 * kPi * lambda_b * pbar * std::pow(d, 2.0 - alpha) / (alpha - 2.0);
    const double self_term =
        4.0 * kPi * peak * peak * lambda_b * std::pow(d, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
    const double expect = mean_term * mean_term + self_term;
    CHECK(res.value == doctest::Approx(expect).epsilon(1e-5));
    CHECK(std::fabs(res.value - expect) <= res.tail_estimate + 1e-6 * expect);
  }

  TEST_CASE("bound: divergent tail is refused") {
    ShotNoiseSpec spec = independent_exponential_fixture(1.0, 10.0);
    spec.f1 = spec.f2 = [](double r) { return 1.0 / (1.0 + r); };
    CHECK_THROWS_AS(joint_moment_bound(spec), DivergentIntegral);
  }

  TEST_CASE("truncation control: doubling r_max moves the bound less than the tail") {
    for (double v : {0.0, 1.0}) {
      auto spec = v == 0.0 ? independent_exponential_fixture(1.0, 8.0)
                           : pzf_power_fixture(0.3, 4.0, 0.6, 1.0, 1.0, 40.0);
      auto wide = spec;
      wide.r_max = 2.0 * spec.r_max;
      const BoundResult narrow_res = joint_moment_bound(spec);
      const BoundResult wide_res = joint_moment_bound(wide);
      CHECK(std::fabs(wide_res.value - narrow_res.value) <= narrow_res.tail_estimate);
    }
  }

  TEST_CASE("simulator: empty and counting behavior") {
    ShotNoiseSpec spec = independent_exponential_fixture(1.0, 5.0);
    spec.lambda_bar = [](double) { return 0.0; };
    RngStream rng(3);
    const auto [a, b] = simulate_shot_noise(spec, rng);
    CHECK(a == 0.0);
    CHECK(b == 0.0);

    // unit marks and f = 1: both sums equal the point count
    ShotNoiseSpec count = independent_exponential_fixture(0.5, 5.0);
    count.f1 = count.f2 = [](double) { return 1.0; };
    count.mark_sampler = [](const std::vector<double>& radii, RngStream&, std::vector<double>& m1,
                            std::vector<double>& m2) {
      m1.assign(radii.size(), 1.0);
      m2.assign(radii.size(), 1.0);
    };
    const ShotNoiseSimulator sim(count);
    CHECK(sim.total_intensity() == doctest::Approx(0.5 * kPi * 25.0).epsilon(1e-6));
    double mean = 0.0;
    for (int t = 0; t < 4000; ++t) {
      RngStream r(derive_seed(8, t));
      const auto [i1, i2] = sim.run(r);
      CHECK(i1 == i2);
      CHECK(i1 == std::floor(i1));
      mean += i1;
    }
    mean /= 4000;
    const double lam = 0.5 * kPi * 25.0;
    CHECK(std::fabs(mean - lam) <= 3.0 * std::sqrt(lam / 4000.0));
  }

  TEST_CASE("simulator: Campbell mean for exponential attenuation") {
    const auto spec = independent_exponential_fixture(0.5, 10.0);
    const ShotNoiseSimulator sim(spec);
    double acc = 0.0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
      RngStream rng(derive_seed(12, t));
      acc += sim.run(rng).first;
    }
    // E[I] = 2 pi lambda int_0^rmax e^-r r dr; var = 2 pi lambda * 2 * 1/4
    const double expect = 2.0 * kPi * 0.5 * (1.0 - 11.0 * std::exp(-10.0));
    CHECK(std::fabs(acc / trials - expect) <= 3.0 * std::sqrt(0.5 * kPi / trials));
  }

  TEST_CASE("estimate: independent marks sit on the bound (tightness)") {
    const auto spec = independent_exponential_fixture(0.5, 12.0);
    const BoundResult bound = joint_moment_bound(spec);
    const MomentEstimate est = estimate_joint_moment(spec, 20000, 99);
    CHECK(std::fabs(est.mean - bound.value) <= 3.0 * est.std_error);
  }

  TEST_CASE("estimate: dependent marks respect both bound directions") {
    const double v = 1.0;
    const auto upper = shared_factor_fixture(0.5, 12.0, v, true);
    const auto lower = shared_factor_fixture(0.5, 12.0, v, false);
    const BoundResult ub = joint_moment_bound(upper);
    const BoundResult lb = joint_moment_bound(lower);
    CHECK(ub.value > lb.value);
    const MomentEstimate est = estimate_joint_moment(upper, 20000, 7);
    CHECK(est.mean <= ub.value + 3.0 * est.std_error);
    CHECK(est.mean >= lb.value - 3.0 * est.std_error);
    // the shared factor genuinely inflates the joint moment above the
    // independent-marks value
    CHECK(est.mean - 3.0 * est.std_error > lb.value);
  }

  TEST_CASE("estimate: error shrinks like sqrt(trials)") {
    const auto spec = independent_exponential_fixture(0.5, 8.0);
    const MomentEstimate half = estimate_joint_moment(spec, 30000, 5);
    const MomentEstimate full = estimate_joint_moment(spec, 60000, 5);
    CHECK(half.std_error / full.std_error == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
    CHECK_THROWS_AS(estimate_joint_moment(spec, 50, 5), std::invalid_argument);
  }

  TEST_CASE("estimate is independent of thread count") {
    const auto spec = independent_exponential_fixture(0.5, 8.0);
    const MomentEstimate a = estimate_joint_moment(spec, 5000, 31);
    const MomentEstimate b = estimate_joint_moment(spec, 5000, 31);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
  }
}
