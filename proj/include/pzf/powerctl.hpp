#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pzf/asymptotics.hpp"
#include "pzf/geometry.hpp"

namespace pzf {

struct InfeasibleTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Effective gain constant of the limit rate, g = L^{alpha/2} (1 - s^2 pi
// lambda_b M) / (s^{2-alpha} 2 pi Pbar lambda_b/(alpha-2) + mu). The mean
// power enters through the denominator only.
double g_factor(const AsymptoticParams& p, int antennas, double mean_power);

// Per-BS water-filling instance: gains_m = g * r_m^{-alpha}
struct WaterfillProblem {
  std::vector<double> gains;
  double peak_power = 1.0;
};

std::vector<double> waterfill_candidate(double level, const WaterfillProblem& prob);

// candidate powers, re-leveled exactly onto the simplex sum = P when the peak
// constraint binds
std::vector<double> allocate(double level, const WaterfillProblem& prob);

// Frozen Monte Carlo distance tuples {r_0..r_{M-1}}; sharing one set across
// all level evaluations makes the mean-power curve deterministic and monotone.
struct DistanceSampleSet {
  int mobiles_per_bs = 0;
  std::vector<double> distance_km;  // sample-major, size = samples * M

  int samples() const { return mobiles_per_bs ? static_cast<int>(distance_km.size()) / mobiles_per_bs : 0; }
};

DistanceSampleSet sample_distance_tuples(PlacementMode placement, double cell_radius,
                                         int mobiles_per_bs, int samples, std::uint64_t seed);

double mean_power_curve(double level, const DistanceSampleSet& set, double g, double alpha,
                        double peak_power);

double solve_level(double target_mean_power, const DistanceSampleSet& set, double g, double alpha,
                   double peak_power);

struct PowerPolicyResult {
  double mean_power = 0.0;  // P-bar used
  double level = 0.0;       // global water level
  double g = 0.0;
  double rate = 0.0;  // mean per-BS limit throughput on the sample set
};

// R-breve(Pbar): solve the level for this mean power and evaluate the mean
// per-BS rate on the frozen sample set.
PowerPolicyResult solve_waterfill_policy(const AsymptoticParams& p, int antennas,
                                         const DistanceSampleSet& set, double mean_power);

// Outer one-dimensional search max_{0 < Pbar <= P} R-breve(Pbar)
PowerPolicyResult optimize_mean_power(const AsymptoticParams& p, int antennas,
                                      PlacementMode placement, int mc_samples, std::uint64_t seed);

std::vector<double> equal_power(int mobiles_per_bs, double peak_power);

}  // namespace pzf
