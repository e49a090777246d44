#pragma once

#include <cmath>
#include <cstdint>

namespace pzf {

// 64-bit finalizer from the splitmix64 generator. Good avalanche; used both
// as the stream output function and for deriving substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}
constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return derive_seed(derive_seed(a, b), c);
}
constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                    std::uint64_t d) {
  return derive_seed(derive_seed(a, b, c), d);
}

// Substream tags. Arbitrary distinct constants; every consumer derives its
// stream as derive_seed(master, tag, ...) so streams never collide.
namespace stream {
inline constexpr std::uint64_t kBsProcess = 0x1001;
inline constexpr std::uint64_t kMobiles = 0x1002;
inline constexpr std::uint64_t kFading = 0x2001;
inline constexpr std::uint64_t kTrial = 0x3001;
inline constexpr std::uint64_t kShotNoise = 0x4001;
inline constexpr std::uint64_t kPowerSamples = 0x5001;
inline constexpr std::uint64_t kThroughputMc = 0x5002;
}  // namespace stream

// Counter-based stream: splitmix64 over a Weyl sequence. Fully determined by
// the seed, cheap to construct, so callers key one per (purpose, ids) tuple.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1]; safe under log()
  double uniform_pos() { return 1.0 - uniform(); }

  double exponential() { return -std::log(uniform_pos()); }

  // standard normal via Box-Muller, second value cached
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(2.0 * exponential());
    const double t = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // CN(0,1): amplitude^2 ~ Exp(1), phase uniform
  void cnormal(double& re, double& im) {
    const double a = std::sqrt(exponential());
    const double t = 6.283185307179586476925286766559 * uniform();
    re = a * std::cos(t);
    im = a * std::sin(t);
  }

  // Exact Poisson sampling by inversion (product of uniforms), chunked so the
  // running product never underflows for large means.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 30.0) {
      total += poisson_small(30.0);
      mean -= 30.0;
    }
    if (mean > 0.0) total += poisson_small(mean);
    return total;
  }

 private:
  std::uint64_t poisson_small(double mean) {
    const double floor_p = std::exp(-mean);
    std::uint64_t k = 0;
    double p = uniform_pos();
    while (p > floor_p) {
      p *= uniform_pos();
      ++k;
    }
    return k;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pzf
