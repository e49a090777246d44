// Times the OpenMP kernels against their serial reference twins on a
// mid-sized network. Build and run manually: ./build/bench/pzf_bench
#include <chrono>
#include <cstdio>

#include "pzf/metrics.hpp"
#include "pzf/precoder.hpp"

using namespace pzf;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& fn, int reps) {
  const auto t0 = clock_type::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  GeometryParams gp{TorusWindow(2.582)};
  gp.bs_density = 30.0;
  gp.mobiles_per_bs = 3;
  gp.cell_radius = 0.15;
  gp.nulling_radius = 0.40;
  const int antennas = 100;

  const NetworkRealization net = build_realization(gp, 42);
  const FadingSource fading(42, 0);
  std::printf("network: %d BSs, %d mobiles, L = %d, D = %.2f km\n", net.bs_count(),
              net.mobile_count(), antennas, gp.nulling_radius);

  const double pre_ser = time_ms([&] { build_precoders_serial(net, fading, antennas); }, 3);
  const double pre_par = time_ms([&] { build_precoders(net, fading, antennas); }, 3);

  const PrecoderSet pre = build_precoders(net, fading, antennas);
  const PowerAllocation alloc = PowerAllocation::equal(net, 1.0);
  MetricsOptions opt;
  opt.antennas = antennas;
  opt.alpha = 4.0;
  opt.sigma2 = 1.0;
  const double met_ser =
      time_ms([&] { compute_link_metrics_serial(net, pre, alloc, fading, opt); }, 3);
  const double met_par = time_ms([&] { compute_link_metrics(net, pre, alloc, fading, opt); }, 3);

  std::printf("%-18s %12s %12s %9s\n", "kernel", "serial ms", "openmp ms", "speedup");
  std::printf("%-18s %12.1f %12.1f %8.1fx\n", "build_precoders", pre_ser, pre_par,
              pre_ser / pre_par);
  std::printf("%-18s %12.1f %12.1f %8.1fx\n", "link_metrics", met_ser, met_par,
              met_ser / met_par);
  return 0;
}
