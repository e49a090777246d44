// Command line front end: Monte Carlo campaigns, closed-form predictions, and
// the shot-noise bound validation table. Results land in --out-dir as CSV
// (per-mobile records) and JSON (campaign summaries).

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pzf/experiments.hpp"
#include "pzf/powerctl.hpp"
#include "pzf/shotnoise.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

struct CliOptions {
  pzf::ScenarioConfig config;
  std::string config_file;
  std::string out_dir = "out";
  // presence flags for overriding a loaded config file
  bool has_alpha = false, has_lambda = false, has_m = false, has_r = false, has_p = false;
  bool has_l = false, has_trials = false, has_seed = false, has_workers = false, has_bs = false;
  std::vector<int> l_values;
  double explicit_d = -1.0, scaled_s = -1.0, scaled_beta = 0.5;
  std::string noise_law, placement, allocation;
  double mu = -1.0, zeta = -1.0, sigma2 = -1.0, edge_snr = std::nan("");
  int edge_ref_l = 25;
};

void add_common_flags(CLI::App* app, CliOptions& o) {
  app->add_option("--config", o.config_file, "JSON config file overriding defaults");
  app->add_option("--out-dir", o.out_dir, "output directory");
  app->add_option("--lambda-b", o.config.lambda_b, "BS density per km^2")->trigger_on_parse();
  app->add_option("--mobiles", o.config.mobiles_per_bs, "mobiles per BS (M)");
  app->add_option("--alpha", o.config.alpha, "path loss exponent");
  app->add_option("--cell-radius", o.config.cell_radius, "cell radius R in km");
  app->add_option("--peak-power", o.config.peak_power, "per-BS peak power P");
  app->add_option("-L,--antennas", o.l_values, "antenna counts to sweep");
  app->add_option("--nulling-d", o.explicit_d, "explicit nulling radius D in km");
  app->add_option("--nulling-s", o.scaled_s, "nulling scale s (D = s L^beta)");
  app->add_option("--nulling-beta", o.scaled_beta, "nulling exponent beta");
  app->add_option("--noise-law", o.noise_law, "scaled | fixed");
  app->add_option("--mu", o.mu, "noise coefficient (scaled law)");
  app->add_option("--zeta", o.zeta, "noise exponent (scaled law)");
  app->add_option("--sigma2", o.sigma2, "noise variance (fixed law)");
  app->add_option("--edge-snr-db", o.edge_snr, "calibrate noise to this cell-edge SNR");
  app->add_option("--edge-snr-ref-l", o.edge_ref_l, "reference antenna count for edge SNR");
  app->add_option("--placement", o.placement, "cell_edge | uniform_disk");
  app->add_option("--allocation", o.allocation, "equal | waterfill");
  app->add_option("--bs-count", o.config.target_bs_count, "expected BS count (sets window side)");
  app->add_option("--trials", o.config.trials, "Monte Carlo repetitions");
  app->add_option("--seed", o.config.master_seed, "master seed");
  app->add_option("--workers", o.config.workers, "worker threads (0 = all)");
  app->add_option("--powerctl-samples", o.config.powerctl_samples,
                  "frozen sample count for the water-filling solver");
  app->add_option("--throughput-samples", o.config.throughput_mc_samples,
                  "Monte Carlo samples for the limit-throughput reference");
  app->add_flag("--phi-unsquared", o.config.normalize_phi_unsquared,
                "normalize SINR by phi instead of phi^2 (literal reading)");
}

pzf::ScenarioConfig resolve_config(const CLI::App* app, CliOptions& o) {
  pzf::ScenarioConfig cfg;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config_file);
    nlohmann::json j;
    in >> j;
    cfg = pzf::ScenarioConfig::from_json(j);
  }
  auto given = [&](const std::string& name) { return app->count(name) > 0; };
  if (given("--lambda-b")) cfg.lambda_b = o.config.lambda_b;
  if (given("--mobiles")) cfg.mobiles_per_bs = o.config.mobiles_per_bs;
  if (given("--alpha")) cfg.alpha = o.config.alpha;
  if (given("--cell-radius")) cfg.cell_radius = o.config.cell_radius;
  if (given("--peak-power")) cfg.peak_power = o.config.peak_power;
  if (given("--antennas")) cfg.antennas = o.l_values;
  if (given("--nulling-d")) {
    cfg.nulling.kind = pzf::NullingRule::Kind::ExplicitD;
    cfg.nulling.d_km = o.explicit_d;
  } else if (given("--nulling-s")) {
    cfg.nulling.kind = pzf::NullingRule::Kind::ScaledS;
    cfg.nulling.s = o.scaled_s;
    cfg.nulling.beta = o.scaled_beta;
  }
  if (given("--noise-law"))
    cfg.noise.law = o.noise_law == "fixed" ? pzf::NoiseLaw::Fixed : pzf::NoiseLaw::Scaled;
  if (given("--edge-snr-db")) {
    cfg.noise.edge_snr_db = o.edge_snr;
    cfg.noise.edge_snr_ref_l = o.edge_ref_l;
  } else {
    if (given("--mu")) {
      cfg.noise.mu = o.mu;
      cfg.noise.edge_snr_db.reset();
    }
    if (given("--zeta")) cfg.noise.zeta = o.zeta;
    if (given("--sigma2")) {
      cfg.noise.sigma2 = o.sigma2;
      cfg.noise.edge_snr_db.reset();
    }
  }
  if (given("--placement"))
    cfg.placement = o.placement == "cell_edge" ? pzf::PlacementMode::CellEdge
                                               : pzf::PlacementMode::UniformDisk;
  if (given("--allocation"))
    cfg.allocation = o.allocation == "waterfill" ? pzf::AllocationPolicy::TwoLevelWaterfill
                                                 : pzf::AllocationPolicy::EqualPower;
  if (given("--bs-count")) cfg.target_bs_count = o.config.target_bs_count;
  if (given("--trials")) cfg.trials = o.config.trials;
  if (given("--seed")) cfg.master_seed = o.config.master_seed;
  if (given("--workers")) cfg.workers = o.config.workers;
  if (given("--powerctl-samples")) cfg.powerctl_samples = o.config.powerctl_samples;
  if (given("--throughput-samples")) cfg.throughput_mc_samples = o.config.throughput_mc_samples;
  if (given("--phi-unsquared")) cfg.normalize_phi_unsquared = true;
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("failed to write " + path.string());
  std::cerr << "wrote " << path.string() << "\n";
}

void write_outputs(const std::string& out_dir, const std::string& stem,
                   const pzf::HistogramOutput& result) {
  std::filesystem::create_directories(out_dir);
  write_file(std::filesystem::path(out_dir) / (stem + ".csv"), result.csv);
  write_file(std::filesystem::path(out_dir) / (stem + "_summary.json"),
             result.summary.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial zero-forcing downlink simulator"};
  app.require_subcommand(1);

  CliOptions o;
  auto* histogram = app.add_subcommand("histogram", "normalized SINR histogram campaign");
  auto* throughput = app.add_subcommand("throughput", "mean BS throughput vs antenna count");
  auto* power = app.add_subcommand("power-compare", "equal vs two-level water-filling");
  auto* shot = app.add_subcommand("shotnoise", "validate the joint-moment bounds");
  auto* predict = app.add_subcommand("predict", "closed-form predictions, no simulation");
  auto* radius = app.add_subcommand("optimal-radius", "optimal nulling scale and radius");
  for (auto* sub : {histogram, throughput, power, predict, radius}) add_common_flags(*&sub, o);

  int shot_trials = 10000;
  std::uint64_t shot_seed = 1;
  std::string shot_out = "out";
  shot->add_option("--trials", shot_trials, "Monte Carlo trials per fixture");
  shot->add_option("--seed", shot_seed, "master seed");
  shot->add_option("--out-dir", shot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (shot->parsed()) {
      const nlohmann::json table = pzf::run_shotnoise_validation(shot_seed, shot_trials);
      std::printf("%-22s %14s %14s %12s %-14s %s\n", "fixture", "bound", "estimate", "stderr",
                  "expectation", "verdict");
      for (const auto& row : table["results"]) {
        std::printf("%-22s %14.6g %14.6g %12.3g %-14s %s\n",
                    row["fixture"].get<std::string>().c_str(), row["bound"].get<double>(),
                    row["estimate"].get<double>(), row["std_error"].get<double>(),
                    row["expectation"].get<std::string>().c_str(),
                    row["verdict"].get<std::string>().c_str());
      }
      std::filesystem::create_directories(shot_out);
      write_file(std::filesystem::path(shot_out) / "shotnoise_summary.json", table.dump(2) + "\n");
      return table["all_pass"].get<bool>() ? 0 : 1;
    }

    const CLI::App* active = app.get_subcommands().front();
    pzf::ScenarioConfig cfg = resolve_config(active, o);

    if (predict->parsed()) {
      cfg.validate();
      nlohmann::json out;
      out["config"] = cfg.to_json();
      nlohmann::json rows = nlohmann::json::array();
      for (int l : cfg.antennas) {
        const pzf::AsymptoticParams p = cfg.asymptotic_params_at(l);
        nlohmann::json row;
        row["L"] = l;
        row["s"] = p.s;
        row["D_km"] = cfg.nulling_radius_at(l);
        row["sigma2"] = pzf::noise_variance(cfg.noise_model(), l);
        row["normalized_sinr_prediction"] = pzf::finite_L_normalized_prediction(p, p.mu);
        row["normalized_sinr_prediction_db"] =
            10.0 * std::log10(pzf::finite_L_normalized_prediction(p, p.mu));
        const pzf::SinrLimit lim =
            pzf::sinr_limit(p, cfg.peak_power / cfg.mobiles_per_bs, cfg.cell_radius);
        row["sinr_limit"] = {{"exponent", lim.exponent},
                             {"coefficient", lim.coefficient},
                             {"regime", lim.regime == pzf::SinrRegime::NoiseLimited
                                            ? "noise_limited"
                                            : lim.regime == pzf::SinrRegime::InterferenceLimited
                                                  ? "interference_limited"
                                                  : "mixed"}};
        const auto eq = pzf::equal_power(cfg.mobiles_per_bs, cfg.peak_power);
        const pzf::ThroughputEstimate r_as = pzf::asymptotic_throughput(
            p, l, [&](const std::vector<double>&) { return eq; }, cfg.placement,
            cfg.throughput_mc_samples, cfg.master_seed);
        row["r_as_equal_power"] = r_as.mean;
        const auto [a_lo, a_hi] = pzf::activation_prob_bounds(p, l, cfg.nulling_radius_at(l));
        row["activation_bounds"] = {a_lo, a_hi};
        if (cfg.nulling_radius_at(l) > cfg.cell_radius) {
          const auto [i_lo, i_hi] = pzf::interference_mean_bounds(p, l, cfg.nulling_radius_at(l));
          row["interference_mean_bounds"] = {i_lo, i_hi};
        }
        rows.push_back(row);
      }
      out["predictions"] = rows;
      std::cout << out.dump(2) << "\n";
      std::filesystem::create_directories(o.out_dir);
      write_file(std::filesystem::path(o.out_dir) / "predictions.json", out.dump(2) + "\n");
      return 0;
    }

    if (radius->parsed()) {
      nlohmann::json out;
      out["protected_fraction_at_mu0"] = 1.0 - 2.0 / cfg.alpha;
      nlohmann::json rows = nlohmann::json::array();
      for (int l : cfg.antennas) {
        const pzf::AsymptoticParams p = cfg.asymptotic_params_at(l);
        const double s_star = pzf::solve_optimal_s(p);
        rows.push_back({{"L", l},
                        {"mu_effective", p.mu},
                        {"s_star", s_star},
                        {"residual", pzf::optimal_s_residual(p, s_star)},
                        {"D_star_km", s_star * std::sqrt(static_cast<double>(l))}});
      }
      out["radii"] = rows;
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (histogram->parsed()) {
      write_outputs(o.out_dir, "histogram", pzf::run_histogram_experiment(cfg));
      return 0;
    }
    if (throughput->parsed()) {
      write_outputs(o.out_dir, "throughput", pzf::run_throughput_sweep(cfg));
      return 0;
    }
    if (power->parsed()) {
      const nlohmann::json summary = pzf::run_power_allocation_comparison(cfg);
      std::cout << summary.dump(2) << "\n";
      std::filesystem::create_directories(o.out_dir);
      write_file(std::filesystem::path(o.out_dir) / "power_compare_summary.json",
                 summary.dump(2) + "\n");
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
