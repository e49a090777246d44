#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "pzf/rng.hpp"

namespace pzf {

// Fading vectors are regenerated on demand from a counter-based stream keyed
// by (master seed, trial, mobile id, bs id). The same pair queried anywhere in
// a trial yields bit-identical entries, so the precoder and the interference
// sums see one consistent channel without storing the full pair tensor.
class FadingSource {
 public:
  FadingSource(std::uint64_t master_seed, std::uint64_t trial)
      : base_(derive_seed(master_seed, stream::kFading, trial)) {}

  void fill(int mobile_id, int bs_id, Eigen::VectorXcd& out) const {
    RngStream rng(derive_seed(base_, static_cast<std::uint64_t>(mobile_id),
                              static_cast<std::uint64_t>(bs_id)));
    double re, im;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      rng.cnormal(re, im);
      out[i] = std::complex<double>(re, im);
    }
  }

  Eigen::VectorXcd vector(int mobile_id, int bs_id, int antennas) const {
    Eigen::VectorXcd g(antennas);
    fill(mobile_id, bs_id, g);
    return g;
  }

 private:
  std::uint64_t base_;
};

inline double path_gain(double distance_km, double alpha) {
  return std::pow(distance_km, -alpha);
}

// h = g * r^{-alpha/2}
inline Eigen::VectorXcd channel_vector(const Eigen::VectorXcd& fading, double distance_km,
                                       double alpha) {
  if (!(distance_km > 0.0))
    throw std::invalid_argument("channel_vector: distance must be positive");
  return fading * std::pow(distance_km, -0.5 * alpha);
}

}  // namespace pzf
