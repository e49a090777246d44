#pragma once

#include <cmath>
#include <vector>

#include "pzf/precoder.hpp"

namespace pzf {

enum class NoiseLaw { Scaled, Fixed };

// Scaled: sigma^2 = mu * L^{-zeta}. Fixed: sigma^2 constant; the implied
// mu(L) = sigma^2 * L^{alpha/2-1} feeds the asymptotic predictions.
struct NoiseModel {
  NoiseLaw law = NoiseLaw::Scaled;
  double mu = 1.0;
  double zeta = 1.0;
  double sigma2 = 1.0;
};

double noise_variance(const NoiseModel& noise, int antennas);
double effective_mu(const NoiseModel& noise, int antennas, double alpha);

// phi^2 per global mobile id, plus the peak constraint check
struct PowerAllocation {
  std::vector<double> phi_sq;

  static PowerAllocation equal(const NetworkRealization& net, double peak_power);
  // largest per-BS excess over the peak (<= 0 when feasible)
  double peak_excess(const NetworkRealization& net, double peak_power) const;
};

struct LinkMetrics {
  double signal = 0.0;
  double interference = 0.0;
  double sinr = 0.0;
  double rate = 0.0;
  double norm_sinr = 0.0;
  double serving_distance_km = 0.0;
  double phi_sq = 0.0;
};

struct LinkMetricsSet {
  std::vector<LinkMetrics> per_mobile;
  double activation_fraction = 0.0;
};

struct MetricsOptions {
  int antennas = 0;
  double alpha = 4.0;
  double sigma2 = 0.0;
  // Eq. (28) prints the normalizer power unsquared; kept as a switch, default
  // uses phi^2 consistently with the limit expressions.
  bool normalize_phi_unsquared = false;
};

std::pair<double, double> sinr_and_rate(double signal, double interference, double sigma2);
double normalized_sinr(double sinr, int antennas, double alpha, double phi_sq,
                       double serving_distance_km, bool phi_unsquared = false);

LinkMetricsSet compute_link_metrics(const NetworkRealization& net, const PrecoderSet& precoders,
                                    const PowerAllocation& powers, const FadingSource& fading,
                                    const MetricsOptions& opt);
LinkMetricsSet compute_link_metrics_serial(const NetworkRealization& net,
                                           const PrecoderSet& precoders,
                                           const PowerAllocation& powers,
                                           const FadingSource& fading, const MetricsOptions& opt);

}  // namespace pzf
