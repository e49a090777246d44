#include "pzf/powerctl.hpp"

#include <algorithm>
#include <cmath>

namespace pzf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double g_factor(const AsymptoticParams& p, int antennas, double mean_power) {
  if (!(mean_power > 0.0)) throw std::invalid_argument("g_factor: mean_power must be positive");
  const double numer = 1.0 - p.s * p.s * kPi * p.lambda_b * p.mobiles_per_bs;
  const double interf =
      std::pow(p.s, 2.0 - p.alpha) * 2.0 * kPi * mean_power * p.lambda_b / (p.alpha - 2.0);
  return std::pow(static_cast<double>(antennas), 0.5 * p.alpha) * numer / (interf + p.mu);
}

std::vector<double> waterfill_candidate(double level, const WaterfillProblem& prob) {
  std::vector<double> powers(prob.gains.size());
  for (std::size_t m = 0; m < prob.gains.size(); ++m)
    powers[m] = std::max(0.0, level - 1.0 / prob.gains[m]);
  return powers;
}

std::vector<double> allocate(double level, const WaterfillProblem& prob) {
  std::vector<double> powers = waterfill_candidate(level, prob);
  double sum = 0.0;
  for (double v : powers) sum += v;
  if (sum <= prob.peak_power) return powers;

  // Peak binds: re-waterfill with the inner level chosen so the active set
  // sums to P exactly. Costs sorted ascending; gamma = (P + sum costs)/k over
  // the active prefix.
  const int m_per = static_cast<int>(prob.gains.size());
  std::vector<double> costs(m_per);
  for (int m = 0; m < m_per; ++m) costs[m] = 1.0 / prob.gains[m];
  std::vector<double> sorted = costs;
  std::sort(sorted.begin(), sorted.end());

  double gamma = 0.0;
  double prefix = 0.0;
  for (int k = 1; k <= m_per; ++k) {
    prefix += sorted[k - 1];
    const double candidate = (prob.peak_power + prefix) / k;
    if (candidate > sorted[k - 1] && (k == m_per || candidate <= sorted[k])) {
      gamma = candidate;
      break;
    }
  }
  for (int m = 0; m < m_per; ++m) powers[m] = std::max(0.0, gamma - costs[m]);
  return powers;
}

DistanceSampleSet sample_distance_tuples(PlacementMode placement, double cell_radius,
                                         int mobiles_per_bs, int samples, std::uint64_t seed) {
  DistanceSampleSet set;
  set.mobiles_per_bs = mobiles_per_bs;
  set.distance_km.resize(static_cast<std::size_t>(samples) * mobiles_per_bs);
  if (placement == PlacementMode::CellEdge) {
    std::fill(set.distance_km.begin(), set.distance_km.end(), cell_radius);
    return set;
  }
  RngStream rng(derive_seed(seed, stream::kPowerSamples));
  for (auto& r : set.distance_km) r = cell_radius * std::sqrt(rng.uniform_pos());
  return set;
}

double mean_power_curve(double level, const DistanceSampleSet& set, double g, double alpha,
                        double peak_power) {
  const int m_per = set.mobiles_per_bs;
  const int n = set.samples();
  double acc = 0.0, comp = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int m = 0; m < m_per; ++m) {
      const double cost = std::pow(set.distance_km[i * m_per + m], alpha) / g;
      sum += std::max(0.0, level - cost);
    }
    const double v = std::min(peak_power, sum);
    const double y = v - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc / n;
}

double solve_level(double target_mean_power, const DistanceSampleSet& set, double g, double alpha,
                   double peak_power) {
  if (!(target_mean_power > 0.0 && target_mean_power <= peak_power))
    throw InfeasibleTarget("solve_level: target mean power must be in (0, P]");
  const double tol = 1e-9 * peak_power;

  double lo = 0.0, hi = 1.0;
  while (mean_power_curve(hi, set, g, alpha, peak_power) < target_mean_power) {
    hi *= 2.0;
    if (hi > 1e18) throw InfeasibleTarget("solve_level: mean power curve saturates below target");
  }
  double level = hi;
  for (int it = 0; it < 200; ++it) {
    level = 0.5 * (lo + hi);
    const double got = mean_power_curve(level, set, g, alpha, peak_power);
    if (std::fabs(got - target_mean_power) <= tol) break;
    if (got < target_mean_power)
      lo = level;
    else
      hi = level;
  }
  return level;
}

PowerPolicyResult solve_waterfill_policy(const AsymptoticParams& p, int antennas,
                                         const DistanceSampleSet& set, double mean_power) {
  PowerPolicyResult res;
  res.mean_power = mean_power;
  res.g = g_factor(p, antennas, mean_power);
  res.level = solve_level(mean_power, set, res.g, p.alpha, p.peak_power);

  const int m_per = set.mobiles_per_bs;
  const int n = set.samples();
  WaterfillProblem prob;
  prob.peak_power = p.peak_power;
  prob.gains.resize(m_per);
  double acc = 0.0, comp = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < m_per; ++m)
      prob.gains[m] = res.g * std::pow(set.distance_km[i * m_per + m], -p.alpha);
    const std::vector<double> powers = allocate(res.level, prob);
    double sum = 0.0;
    for (int m = 0; m < m_per; ++m) sum += std::log2(1.0 + prob.gains[m] * powers[m]);
    const double y = sum - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  res.rate = acc / n;
  return res;
}

PowerPolicyResult optimize_mean_power(const AsymptoticParams& p, int antennas,
                                      PlacementMode placement, int mc_samples, std::uint64_t seed) {
  const DistanceSampleSet set =
      sample_distance_tuples(placement, p.cell_radius, p.mobiles_per_bs, mc_samples, seed);

  auto rate_at = [&](double pbar) { return solve_waterfill_policy(p, antennas, set, pbar).rate; };

  // golden-section maximization on (0, P]
  const double inv_phi = 0.6180339887498948482;
  double a = 1e-6 * p.peak_power;
  double b = p.peak_power;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = rate_at(x1);
  double f2 = rate_at(x2);
  while (b - a > 1e-6 * p.peak_power) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = rate_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = rate_at(x1);
    }
  }
  return solve_waterfill_policy(p, antennas, set, 0.5 * (a + b));
}

std::vector<double> equal_power(int mobiles_per_bs, double peak_power) {
  return std::vector<double>(mobiles_per_bs, peak_power / mobiles_per_bs);
}

}  // namespace pzf
