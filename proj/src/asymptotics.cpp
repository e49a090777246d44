#include "pzf/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pzf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void AsymptoticParams::validate() const {
  if (!(alpha > 2.0)) throw std::invalid_argument("alpha must exceed 2");
  if (!(beta > 0.0 && beta <= 0.5)) throw std::invalid_argument("beta must be in (0, 0.5]");
  if (mobiles_per_bs < 1) throw std::invalid_argument("mobiles_per_bs must be >= 1");
  if (!(lambda_b > 0.0)) throw std::invalid_argument("lambda_b must be positive");
  if (!(mean_power > 0.0)) throw std::invalid_argument("mean_power must be positive");
  if (mu < 0.0) throw std::invalid_argument("mu must be >= 0");
  if (beta == 0.5 && !(s * s * kPi * lambda_b * mobiles_per_bs < 1.0))
    throw std::invalid_argument("beta = 0.5 requires s^2 pi lambda_b M < 1");
}

double regularized_gamma_q(int a, double z) {
  if (a < 1) throw std::invalid_argument("regularized_gamma_q: a must be >= 1");
  if (!(z >= 0.0)) throw std::invalid_argument("regularized_gamma_q: z must be >= 0");
  if (z == 0.0) return 1.0;
  // log-space Poisson CDF: sum_{i=0}^{a-1} exp(-z + i ln z - lgamma(i+1))
  double max_log = -z;
  std::vector<double> logs(a);
  const double lz = std::log(z);
  for (int i = 0; i < a; ++i) {
    logs[i] = -z + i * lz - std::lgamma(i + 1.0);
    max_log = std::max(max_log, logs[i]);
  }
  double acc = 0.0;
  for (int i = 0; i < a; ++i) acc += std::exp(logs[i] - max_log);
  const double v = std::exp(max_log) * acc;
  return std::min(v, 1.0);
}

namespace {

// s^{2-alpha} * 2 pi Pbar lambda_b / (alpha - 2)
double interference_coefficient(const AsymptoticParams& p, double s) {
  return std::pow(s, 2.0 - p.alpha) * 2.0 * kPi * p.mean_power * p.lambda_b / (p.alpha - 2.0);
}

}  // namespace

SinrLimit sinr_limit(const AsymptoticParams& p, double phi_sq, double serving_distance_km) {
  p.validate();
  const double s_tilde = p.beta == 0.5 ? p.s : 0.0;
  const double numer = (1.0 - s_tilde * s_tilde * kPi * p.lambda_b * p.mobiles_per_bs) * phi_sq *
                       std::pow(serving_distance_km, -p.alpha);
  const double crossover = p.beta * (p.alpha - 2.0);

  SinrLimit lim;
  if (p.zeta < crossover) {
    if (!(p.mu > 0.0))
      throw std::invalid_argument("sinr_limit: noise-limited regime requires mu > 0");
    lim.regime = SinrRegime::NoiseLimited;
    lim.exponent = 1.0 + p.zeta;
    lim.coefficient = numer / p.mu;
  } else {
    const double mu_tilde = p.zeta == crossover ? p.mu : 0.0;
    lim.regime = p.zeta == crossover ? SinrRegime::Mixed : SinrRegime::InterferenceLimited;
    lim.exponent = 1.0 + crossover;
    lim.coefficient = numer / (interference_coefficient(p, p.s) + mu_tilde);
  }
  return lim;
}

double finite_L_normalized_prediction(const AsymptoticParams& p, double mu_eff) {
  const double numer = 1.0 - p.s * p.s * kPi * p.lambda_b * p.mobiles_per_bs;
  return numer / (interference_coefficient(p, p.s) + mu_eff);
}

double optimal_s_residual(const AsymptoticParams& p, double s) {
  return p.alpha / (p.alpha - 2.0) * kPi * p.lambda_b * s * s +
         p.mu / p.mean_power * std::pow(s, p.alpha) - 1.0 / p.mobiles_per_bs;
}

double solve_optimal_s(const AsymptoticParams& p) {
  if (!(p.alpha > 2.0)) throw std::invalid_argument("solve_optimal_s: alpha must exceed 2");
  // LHS is strictly increasing from 0; the root sits below 1/sqrt(pi lambda_b M)
  double lo = 0.0;
  double hi = 1.0 / std::sqrt(kPi * p.lambda_b * p.mobiles_per_bs);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (optimal_s_residual(p, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-17 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double optimal_radius(const AsymptoticParams& p, double antennas) {
  if (antennas < 0.0) throw std::invalid_argument("optimal_radius: antennas must be >= 0");
  if (antennas == 0.0) return 0.0;
  return solve_optimal_s(p) * std::sqrt(antennas);
}

double asymptotic_rate(const AsymptoticParams& p, int antennas, double phi_sq,
                       double serving_distance_km) {
  const double numer = 1.0 - p.s * p.s * kPi * p.lambda_b * p.mobiles_per_bs;
  const double arg = std::pow(static_cast<double>(antennas), 0.5 * p.alpha) * numer * phi_sq *
                     std::pow(serving_distance_km, -p.alpha) /
                     (interference_coefficient(p, p.s) + p.mu);
  return std::log2(1.0 + arg);
}

ThroughputEstimate asymptotic_throughput(const AsymptoticParams& p, int antennas,
                                         const AllocationRule& allocation, PlacementMode placement,
                                         int mc_samples, std::uint64_t seed) {
  const int m_per = p.mobiles_per_bs;
  std::vector<double> dist(m_per);

  auto bs_sum = [&](const std::vector<double>& r) {
    const std::vector<double> powers = allocation(r);
    double sum = 0.0;
    for (int m = 0; m < m_per; ++m)
      if (powers[m] > 0.0) sum += asymptotic_rate(p, antennas, powers[m], r[m]);
    return sum;
  };

  if (placement == PlacementMode::CellEdge) {
    // degenerate distance law: deterministic value
    std::fill(dist.begin(), dist.end(), p.cell_radius);
    return {bs_sum(dist), 0.0, 1};
  }

  RngStream rng(derive_seed(seed, stream::kThroughputMc));
  double acc = 0.0, acc2 = 0.0, comp = 0.0;
  for (int n = 0; n < mc_samples; ++n) {
    for (int m = 0; m < m_per; ++m) dist[m] = p.cell_radius * std::sqrt(rng.uniform_pos());
    const double v = bs_sum(dist);
    // Kahan; the mean must not depend on summation luck
    const double y = v - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
    acc2 += v * v;
  }
  const double mean = acc / mc_samples;
  const double var = std::max(0.0, acc2 / mc_samples - mean * mean);
  return {mean, std::sqrt(var / mc_samples), mc_samples};
}

std::pair<double, double> activation_prob_bounds(const AsymptoticParams& p, int antennas,
                                                 double nulling_radius) {
  const int a = antennas / p.mobiles_per_bs;  // floor(L/M)
  if (a < 1) return {0.0, 1.0};
  const double r_out = nulling_radius + p.cell_radius;
  const double r_in = std::max(nulling_radius - p.cell_radius, 0.0);
  const double lower = regularized_gamma_q(a, kPi * p.lambda_b * r_out * r_out);
  const double upper = regularized_gamma_q(a + 1, kPi * p.lambda_b * r_in * r_in);
  return {lower, upper};
}

std::pair<double, double> interference_mean_bounds(const AsymptoticParams& p, int antennas,
                                                   double nulling_radius) {
  if (!(nulling_radius > p.cell_radius))
    throw std::invalid_argument("interference_mean_bounds: requires D > R");
  const auto [q_lo, q_hi] = activation_prob_bounds(p, antennas, nulling_radius);
  const double base = 2.0 * kPi * p.lambda_b * std::pow(nulling_radius, 2.0 - p.alpha) /
                      (p.alpha - 2.0);
  const double slack = p.envelope_delta * std::pow(nulling_radius, -p.envelope_gamma) *
                       (p.alpha - 2.0) / (p.alpha + p.envelope_gamma - 2.0);
  return {q_lo * base * (p.mean_power - slack), q_hi * base * (p.mean_power + slack)};
}

}  // namespace pzf
