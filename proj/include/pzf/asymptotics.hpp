#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pzf/geometry.hpp"

namespace pzf {

// Parameters of the L -> infinity regime: nulling radius D = s * L^beta,
// noise sigma^2 = mu * L^{-zeta}.
struct AsymptoticParams {
  double lambda_b = 30.0;   // BS per km^2
  int mobiles_per_bs = 3;   // M
  double alpha = 4.0;       // path loss exponent
  double s = 0.04;          // km per sqrt(antenna)
  double beta = 0.5;
  double mu = 0.0;          // noise coefficient
  double zeta = 1.0;        // noise exponent
  double mean_power = 1.0;  // P-bar
  double peak_power = 1.0;  // P
  double cell_radius = 0.15;
  double envelope_delta = 0.0;  // power-correlation envelope |xi| <= delta r^-gamma
  double envelope_gamma = 1.0;

  void validate() const;
};

enum class SinrRegime { NoiseLimited, InterferenceLimited, Mixed };

struct SinrLimit {
  double exponent = 0.0;     // eta_0 scales as L^exponent
  double coefficient = 0.0;  // lim L^{-exponent} eta_0
  SinrRegime regime = SinrRegime::Mixed;
};

// Regularized upper incomplete gamma Q(a, z) for integer a >= 1, evaluated as
// the Poisson(z) left tail e^{-z} sum_{i<a} z^i/i! (log-space, stable for
// large z and a).
double regularized_gamma_q(int a, double z);

SinrLimit sinr_limit(const AsymptoticParams& p, double phi_sq, double serving_distance_km);

// Finite-L normalized-SINR reference: (1 - s^2 pi lambda_b M) /
// (s^{2-alpha} 2 pi Pbar lambda_b/(alpha-2) + mu_eff), with mu_eff the noise
// coefficient at this L (constant mu, or sigma^2 L^{alpha/2-1}).
double finite_L_normalized_prediction(const AsymptoticParams& p, double mu_eff);

// Unique positive root of alpha/(alpha-2) pi lambda_b s^2 + (mu/Pbar) s^alpha = 1/M.
double solve_optimal_s(const AsymptoticParams& p);
double optimal_s_residual(const AsymptoticParams& p, double s);
double optimal_radius(const AsymptoticParams& p, double antennas);

// Per-mobile limit rate at finite L
double asymptotic_rate(const AsymptoticParams& p, int antennas, double phi_sq,
                       double serving_distance_km);

struct ThroughputEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

using AllocationRule = std::function<std::vector<double>(const std::vector<double>&)>;

// Monte Carlo estimate of the mean per-BS limit throughput over mobile
// placements; CellEdge short-circuits to the deterministic value.
ThroughputEstimate asymptotic_throughput(const AsymptoticParams& p, int antennas,
                                         const AllocationRule& allocation, PlacementMode placement,
                                         int mc_samples, std::uint64_t seed);

// Gamma brackets on Pr(a_k = 1) and on E[I] at nulling radius D
std::pair<double, double> activation_prob_bounds(const AsymptoticParams& p, int antennas,
                                                 double nulling_radius);
std::pair<double, double> interference_mean_bounds(const AsymptoticParams& p, int antennas,
                                                   double nulling_radius);

}  // namespace pzf
