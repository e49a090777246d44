#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "pzf/channel.hpp"
#include "pzf/geometry.hpp"

namespace pzf {

// Raised when the target fading lies in the span of the interference fadings
// (zero-probability event under the continuous fading law; indicates a broken
// test construction or a numerical problem).
struct ProjectionCollapse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// BS k transmits iff it can null every in-disk mobile and still serve its own.
bool activation_flag(int n_nulled, bool served_all_inside, int antennas);

// Incrementally built orthonormal basis (modified Gram-Schmidt, one
// reorthogonalization pass). insert() drops vectors whose residual falls
// under the relative rank tolerance.
class OrthonormalBasis {
 public:
  OrthonormalBasis(int dim, int capacity) : q_(dim, capacity) {}

  static constexpr double kRankTol = 1e-10;

  bool insert(const Eigen::VectorXcd& v);
  int size() const { return size_; }

  // residual of v after removing its component in the span
  Eigen::VectorXcd project_out(const Eigen::VectorXcd& v) const;

 private:
  Eigen::MatrixXcd q_;
  int size_ = 0;
};

// Unit-norm beamformer for `target`, orthogonal to every interference vector.
Eigen::VectorXcd zf_weight(const Eigen::VectorXcd& target,
                           const std::vector<Eigen::VectorXcd>& interference);

struct PrecoderSet {
  std::vector<std::uint8_t> active;     // a_k
  std::vector<Eigen::MatrixXcd> beams;  // [k]: L x M weight columns when active, else empty
};

PrecoderSet build_precoders(const NetworkRealization& net, const FadingSource& fading,
                            int antennas);
// straightforward reference loop, kept for testing the parallel kernel
PrecoderSet build_precoders_serial(const NetworkRealization& net, const FadingSource& fading,
                                   int antennas);

}  // namespace pzf
