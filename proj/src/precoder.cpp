#include "pzf/precoder.hpp"

#include <algorithm>
#include <cmath>

namespace pzf {

bool activation_flag(int n_nulled, bool served_all_inside, int antennas) {
  if (n_nulled < 0) throw std::invalid_argument("activation_flag: n_nulled < 0");
  // With M_k inside the disk, |D_k u M_k| = |D_k|; otherwise the union clause
  // can only hold through |D_k| < L.
  return n_nulled < antennas || (served_all_inside && n_nulled <= antennas);
}

bool OrthonormalBasis::insert(const Eigen::VectorXcd& v) {
  const double norm_in = v.norm();
  Eigen::VectorXcd r = v;
  for (int pass = 0; pass < 2; ++pass)
    for (int j = 0; j < size_; ++j) r -= q_.col(j).dot(r) * q_.col(j);
  const double norm_r = r.norm();
  if (norm_r <= kRankTol * norm_in) return false;
  q_.col(size_++) = r / norm_r;
  return true;
}

Eigen::VectorXcd OrthonormalBasis::project_out(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd r = v;
  for (int pass = 0; pass < 2; ++pass)
    for (int j = 0; j < size_; ++j) r -= q_.col(j).dot(r) * q_.col(j);
  return r;
}

Eigen::VectorXcd zf_weight(const Eigen::VectorXcd& target,
                           const std::vector<Eigen::VectorXcd>& interference) {
  const int dim = static_cast<int>(target.size());
  if (static_cast<int>(interference.size()) > dim - 1)
    throw std::invalid_argument("zf_weight: more than L-1 interference vectors");
  OrthonormalBasis basis(dim, static_cast<int>(interference.size()));
  for (const auto& g : interference) basis.insert(g);
  Eigen::VectorXcd w = basis.project_out(target);
  const double n = w.norm();
  if (n <= 1e-10 * target.norm())
    throw ProjectionCollapse("zf_weight: target inside interference span");
  return w / n;
}

namespace {

// Precoders for one BS. Interference set for served mobile i is D_k \ {i}; a
// shared basis over the non-served part of D_k is extended per served mobile
// with the other in-disk served fadings.
void bs_precoders(const NetworkRealization& net, const FadingSource& fading, int antennas, int k,
                  PrecoderSet& out) {
  const int m_per = net.mobiles_per_bs;
  const auto& nulled = net.nulled_sets[k];

  const int first_served = k * m_per;
  const int last_served = first_served + m_per - 1;
  auto served_by_k = [&](int id) { return id >= first_served && id <= last_served; };

  int n_served_inside = 0;
  for (int id : nulled)
    if (served_by_k(id)) ++n_served_inside;

  const int n_nulled = static_cast<int>(nulled.size());
  const bool all_inside = n_served_inside == m_per;
  if (!activation_flag(n_nulled, all_inside, antennas)) {
    out.active[k] = 0;
    return;
  }
  out.active[k] = 1;

  OrthonormalBasis prefix(antennas, n_nulled);
  Eigen::VectorXcd buf(antennas);
  for (int id : nulled) {
    if (served_by_k(id)) continue;
    fading.fill(id, k, buf);
    prefix.insert(buf);
  }

  std::vector<int> served_inside;
  served_inside.reserve(n_served_inside);
  for (int id : nulled)
    if (served_by_k(id)) served_inside.push_back(id);

  Eigen::MatrixXcd beams(antennas, m_per);
  for (int m = 0; m < m_per; ++m) {
    const int i = first_served + m;
    OrthonormalBasis basis = prefix;
    for (int other : served_inside) {
      if (other == i) continue;
      fading.fill(other, k, buf);
      basis.insert(buf);
    }
    fading.fill(i, k, buf);
    Eigen::VectorXcd w = basis.project_out(buf);
    const double n = w.norm();
    if (n <= 1e-10 * buf.norm())
      throw ProjectionCollapse("build_precoders: projection collapse at BS " + std::to_string(k));
    beams.col(m) = w / n;
  }
  out.beams[k] = std::move(beams);
}

}  // namespace

PrecoderSet build_precoders_serial(const NetworkRealization& net, const FadingSource& fading,
                                   int antennas) {
  PrecoderSet out;
  out.active.assign(net.bs_count(), 0);
  out.beams.assign(net.bs_count(), {});
  for (int k = 0; k < net.bs_count(); ++k) bs_precoders(net, fading, antennas, k, out);
  return out;
}

PrecoderSet build_precoders(const NetworkRealization& net, const FadingSource& fading,
                            int antennas) {
  PrecoderSet out;
  out.active.assign(net.bs_count(), 0);
  out.beams.assign(net.bs_count(), {});
  bool collapsed = false;
#pragma omp parallel for schedule(dynamic, 4)
  for (int k = 0; k < net.bs_count(); ++k) {
    try {
      bs_precoders(net, fading, antennas, k, out);
    } catch (const ProjectionCollapse&) {
#pragma omp atomic write
      collapsed = true;
    }
  }
  if (collapsed) throw ProjectionCollapse("build_precoders: projection collapse");
  return out;
}

}  // namespace pzf
