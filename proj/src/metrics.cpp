#include "pzf/metrics.hpp"

#include <stdexcept>

namespace pzf {

double noise_variance(const NoiseModel& noise, int antennas) {
  if (noise.law == NoiseLaw::Scaled)
    return noise.mu * std::pow(static_cast<double>(antennas), -noise.zeta);
  return noise.sigma2;
}

double effective_mu(const NoiseModel& noise, int antennas, double alpha) {
  if (noise.law == NoiseLaw::Scaled) return noise.mu;
  return noise.sigma2 * std::pow(static_cast<double>(antennas), 0.5 * alpha - 1.0);
}

PowerAllocation PowerAllocation::equal(const NetworkRealization& net, double peak_power) {
  PowerAllocation a;
  a.phi_sq.assign(net.mobile_count(), peak_power / net.mobiles_per_bs);
  return a;
}

double PowerAllocation::peak_excess(const NetworkRealization& net, double peak_power) const {
  double worst = -peak_power;
  for (int k = 0; k < net.bs_count(); ++k) {
    double sum = 0.0;
    for (int m = 0; m < net.mobiles_per_bs; ++m) sum += phi_sq[k * net.mobiles_per_bs + m];
    worst = std::max(worst, sum - peak_power);
  }
  return worst;
}

std::pair<double, double> sinr_and_rate(double signal, double interference, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sinr_and_rate: sigma2 must be positive");
  const double sinr = signal / (interference + sigma2);
  return {sinr, std::log2(1.0 + sinr)};
}

double normalized_sinr(double sinr, int antennas, double alpha, double phi_sq,
                       double serving_distance_km, bool phi_unsquared) {
  const double power_term = phi_unsquared ? std::sqrt(phi_sq) : phi_sq;
  const double scale = std::pow(static_cast<double>(antennas), 0.5 * alpha) * power_term *
                       std::pow(serving_distance_km, -alpha);
  return sinr / scale;
}

namespace {

// All quantities for one measured mobile. Interference runs over every active
// stream in the window, including streams of BSs that null this mobile; their
// leakage is summed as-is so numerical nulls stay observable.
LinkMetrics link_for_mobile(const NetworkRealization& net, const PrecoderSet& precoders,
                            const PowerAllocation& powers, const FadingSource& fading,
                            const MetricsOptions& opt, int j, Eigen::VectorXcd& buf) {
  const int m_per = net.mobiles_per_bs;
  const Point2& pos = net.mobile_position(j);

  LinkMetrics out;
  out.serving_distance_km = net.serving_distance_km[j];
  out.phi_sq = powers.phi_sq[j];

  double interference = 0.0;
  for (int k = 0; k < net.bs_count(); ++k) {
    if (!precoders.active[k]) continue;
    const double r = net.window.distance(pos, net.bs_positions[k]);
    const double gain = path_gain(r, opt.alpha);
    fading.fill(j, k, buf);
    for (int m = 0; m < m_per; ++m) {
      const int stream = k * m_per + m;
      const double p = powers.phi_sq[stream];
      const double cross = std::norm(buf.dot(precoders.beams[k].col(m)));
      if (stream == j) {
        out.signal = p * gain * cross;
      } else {
        interference += p * gain * cross;
      }
    }
  }
  out.interference = interference;
  std::tie(out.sinr, out.rate) = sinr_and_rate(out.signal, out.interference, opt.sigma2);
  out.norm_sinr = normalized_sinr(out.sinr, opt.antennas, opt.alpha, out.phi_sq,
                                  out.serving_distance_km, opt.normalize_phi_unsquared);
  return out;
}

double active_fraction(const PrecoderSet& p) {
  if (p.active.empty()) return 0.0;
  double n = 0.0;
  for (auto a : p.active) n += a;
  return n / static_cast<double>(p.active.size());
}

}  // namespace

LinkMetricsSet compute_link_metrics_serial(const NetworkRealization& net,
                                           const PrecoderSet& precoders,
                                           const PowerAllocation& powers,
                                           const FadingSource& fading, const MetricsOptions& opt) {
  LinkMetricsSet set;
  set.per_mobile.resize(net.mobile_count());
  set.activation_fraction = active_fraction(precoders);
  Eigen::VectorXcd buf(opt.antennas);
  for (int j = 0; j < net.mobile_count(); ++j)
    set.per_mobile[j] = link_for_mobile(net, precoders, powers, fading, opt, j, buf);
  return set;
}

LinkMetricsSet compute_link_metrics(const NetworkRealization& net, const PrecoderSet& precoders,
                                    const PowerAllocation& powers, const FadingSource& fading,
                                    const MetricsOptions& opt) {
  LinkMetricsSet set;
  set.per_mobile.resize(net.mobile_count());
  set.activation_fraction = active_fraction(precoders);
#pragma omp parallel
  {
    Eigen::VectorXcd buf(opt.antennas);
#pragma omp for schedule(dynamic, 16)
    for (int j = 0; j < net.mobile_count(); ++j)
      set.per_mobile[j] = link_for_mobile(net, precoders, powers, fading, opt, j, buf);
  }
  return set;
}

}  // namespace pzf
