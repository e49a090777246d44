#include "pzf/shotnoise.hpp"

#include <algorithm>
#include <cmath>

namespace pzf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const RadialFn& f, double a, double m, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson over a geometric segmentation of [a, b]. The segmentation
// keeps recursion local for integrands that span decades (power-law tails,
// indicator jumps); the tolerance is split across segments from a coarse pass.
double integrate(const RadialFn& f, double a, double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  const double span = b - a;
  for (int k = 40; k >= 1; --k) {
    const double x = a + span * std::ldexp(1.0, -k);
    if (x > cuts.back() * (1.0 + 1e-14) && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);

  const int nseg = static_cast<int>(cuts.size()) - 1;
  std::vector<double> fa(nseg), fm(nseg), fb(nseg), whole(nseg);
  double coarse = 0.0;
  for (int i = 0; i < nseg; ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    fa[i] = f(cuts[i]);
    fm[i] = f(m);
    fb[i] = f(cuts[i + 1]);
    whole[i] = simpson(cuts[i], cuts[i + 1], fa[i], fm[i], fb[i]);
    coarse += std::fabs(whole[i]);
  }
  const double tol_seg = rel_tol * std::max(coarse, 1e-300) / nseg;

  double total = 0.0;
  for (int i = 0; i < nseg; ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    total += adaptive_step(f, cuts[i], m, cuts[i + 1], fa[i], fm[i], fb[i], whole[i], tol_seg, 45);
  }
  return total;
}

struct TailInfo {
  double estimate = 0.0;
};

// Octave-decay tail estimate for int_{r_max}^inf g(r) dr; throws when the
// octave masses do not decay geometrically.
double tail_beyond(const RadialFn& g, double r_max) {
  const double t1 = integrate(g, r_max, 2.0 * r_max, 1e-8);
  const double t2 = integrate(g, 2.0 * r_max, 4.0 * r_max, 1e-8);
  const double t3 = integrate(g, 4.0 * r_max, 8.0 * r_max, 1e-8);
  const double sum = t1 + t2 + t3;
  if (sum <= 0.0) return 0.0;
  if (!(t2 < 0.95 * t1 && t3 < 0.95 * t2))
    throw DivergentIntegral("joint_moment_bound: integrand tail does not decay beyond r_max");
  const double ratio = t3 / std::max(t2, 1e-300);
  return sum + t3 * ratio / (1.0 - ratio);
}

}  // namespace

BoundResult joint_moment_bound(const ShotNoiseSpec& spec) {
  auto integrand_k = [&](const RadialFn& f, const RadialFn& q) {
    return [&f, &q, &spec](double r) { return f(r) * q(r) * spec.lambda_bar(r) * r; };
  };
  const RadialFn g1 = integrand_k(spec.f1, spec.q1);
  const RadialFn g2 = integrand_k(spec.f2, spec.q2);
  const RadialFn g0 = [&](double r) {
    return spec.f1(r) * spec.f2(r) * spec.q0(r) * spec.lambda_bar(r) * r;
  };

  const double a1 = 2.0 * kPi * integrate(g1, 0.0, spec.r_max, 1e-8);
  const double a2 = 2.0 * kPi * integrate(g2, 0.0, spec.r_max, 1e-8);
  const double b0 = 2.0 * kPi * integrate(g0, 0.0, spec.r_max, 1e-8);

  const double tail1 = 2.0 * kPi * tail_beyond(g1, spec.r_max);
  const double tail2 = 2.0 * kPi * tail_beyond(g2, spec.r_max);
  const double tail0 = 2.0 * kPi * tail_beyond(g0, spec.r_max);

  BoundResult res;
  res.value = a1 * a2 + b0;
  res.tail_estimate = tail1 * (std::fabs(a2) + tail2) + tail2 * std::fabs(a1) + tail0;
  return res;
}

ShotNoiseSimulator::ShotNoiseSimulator(const ShotNoiseSpec& spec) : spec_(spec) {
  if (!(spec.r_max > 0.0)) throw std::invalid_argument("ShotNoiseSimulator: r_max must be > 0");
  // radial mass table for inverse-CDF sampling of point radii
  const int n = 8192;
  grid_.resize(n + 1);
  cdf_.resize(n + 1);
  cdf_[0] = 0.0;
  grid_[0] = 0.0;
  double prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double r0 = spec.r_max * (i - 1) / n;
    const double r1 = spec.r_max * i / n;
    const double mid = 0.5 * (r0 + r1);
    const double mass = 2.0 * kPi *
                        (spec.lambda_bar(r0) * r0 + 4.0 * spec.lambda_bar(mid) * mid +
                         spec.lambda_bar(r1) * r1) /
                        6.0 * (r1 - r0);
    prev += mass;
    grid_[i] = r1;
    cdf_[i] = prev;
  }
  total_intensity_ = prev;
}

std::pair<double, double> ShotNoiseSimulator::run(RngStream& rng) const {
  const std::uint64_t n = rng.poisson(total_intensity_);
  std::vector<double> radii(n);
  for (auto& r : radii) {
    const double u = rng.uniform() * total_intensity_;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t hi = std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
    const double c0 = cdf_[hi - 1], c1 = cdf_[hi];
    const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    r = grid_[hi - 1] + t * (grid_[hi] - grid_[hi - 1]);
  }
  std::vector<double> m1, m2;
  spec_.mark_sampler(radii, rng, m1, m2);
  double i1 = 0.0, i2 = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    i1 += spec_.f1(radii[i]) * m1[i];
    i2 += spec_.f2(radii[i]) * m2[i];
  }
  return {i1, i2};
}

std::pair<double, double> simulate_shot_noise(const ShotNoiseSpec& spec, RngStream& rng) {
  return ShotNoiseSimulator(spec).run(rng);
}

MomentEstimate estimate_joint_moment(const ShotNoiseSpec& spec, int n_trials, std::uint64_t seed) {
  if (n_trials < 100) throw std::invalid_argument("estimate_joint_moment: need >= 100 trials");
  const ShotNoiseSimulator sim(spec);
  std::vector<double> products(n_trials);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < n_trials; ++t) {
    RngStream rng(derive_seed(seed, stream::kShotNoise, static_cast<std::uint64_t>(t)));
    const auto [i1, i2] = sim.run(rng);
    products[t] = i1 * i2;
  }
  // compensated, index-ordered reduction: identical output for any thread count
  double acc = 0.0, comp = 0.0;
  for (double v : products) {
    const double y = v - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  const double mean = acc / n_trials;
  double var_acc = 0.0, var_comp = 0.0;
  for (double v : products) {
    const double d = (v - mean) * (v - mean);
    const double y = d - var_comp;
    const double t = var_acc + y;
    var_comp = (t - var_acc) - y;
    var_acc = t;
  }
  const double var = var_acc / std::max(1, n_trials - 1);
  return {mean, std::sqrt(var / n_trials), n_trials};
}

// --- fixtures -------------------------------------------------------------

ShotNoiseSpec independent_exponential_fixture(double lambda, double r_max) {
  ShotNoiseSpec spec;
  spec.f1 = spec.f2 = [](double r) { return std::exp(-r); };
  spec.q0 = spec.q1 = spec.q2 = [](double) { return 1.0; };
  spec.lambda_bar = [lambda](double) { return lambda; };
  spec.mark_sampler = [](const std::vector<double>& radii, RngStream& rng,
                         std::vector<double>& m1, std::vector<double>& m2) {
    m1.resize(radii.size());
    m2.resize(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      m1[i] = rng.exponential();
      m2[i] = rng.exponential();
    }
  };
  spec.r_max = r_max;
  return spec;
}

ShotNoiseSpec shared_factor_fixture(double lambda, double r_max, double variance, bool upper) {
  ShotNoiseSpec spec;
  spec.f1 = spec.f2 = [](double r) { return std::exp(-r); };
  const double second_moment = 1.0 + variance;  // E[Z^2]
  if (upper) {
    const double root = std::sqrt(second_moment);
    spec.q1 = spec.q2 = [root](double) { return root; };
    spec.q0 = [second_moment](double) { return second_moment; };
  } else {
    spec.q1 = spec.q2 = [](double) { return 1.0; };
    spec.q0 = [](double) { return 1.0; };
  }
  spec.lambda_bar = [lambda](double) { return lambda; };
  // Z lognormal with E[Z] = 1, var(Z) = variance; xi i.i.d. Exp(1)
  const double ln_sigma2 = std::log(second_moment);
  spec.mark_sampler = [ln_sigma2](const std::vector<double>& radii, RngStream& rng,
                                  std::vector<double>& m1, std::vector<double>& m2) {
    const double z = std::exp(std::sqrt(ln_sigma2) * rng.normal() - 0.5 * ln_sigma2);
    m1.resize(radii.size());
    m2.resize(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      m1[i] = z * rng.exponential();
      m2[i] = z * rng.exponential();
    }
  };
  spec.r_max = r_max;
  return spec;
}

ShotNoiseSpec zero_mark_fixture(double lambda, double r_max) {
  ShotNoiseSpec spec = independent_exponential_fixture(lambda, r_max);
  spec.q0 = spec.q1 = spec.q2 = [](double) { return 0.0; };
  spec.mark_sampler = [](const std::vector<double>& radii, RngStream&, std::vector<double>& m1,
                         std::vector<double>& m2) {
    m1.assign(radii.size(), 0.0);
    m2.assign(radii.size(), 0.0);
  };
  return spec;
}

ShotNoiseSpec pzf_power_fixture(double lambda_b, double alpha, double nulling_radius,
                                double mean_power, double peak_power, double r_max) {
  ShotNoiseSpec spec;
  spec.f1 = spec.f2 = [alpha, nulling_radius](double r) {
    return r > nulling_radius ? std::pow(r, -alpha) : 0.0;
  };
  spec.q1 = spec.q2 = [mean_power](double) { return mean_power; };
  spec.q0 = [peak_power](double) { return 2.0 * peak_power * peak_power; };
  spec.lambda_bar = [lambda_b](double) { return lambda_b; };
  spec.mark_sampler = [mean_power](const std::vector<double>& radii, RngStream& rng,
                                   std::vector<double>& m1, std::vector<double>& m2) {
    m1.resize(radii.size());
    m2.resize(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double p = mean_power * rng.exponential();  // P |zeta|^2 with M = 1
      m1[i] = p;
      m2[i] = p;
    }
  };
  spec.r_max = r_max;
  return spec;
}

}  // namespace pzf
