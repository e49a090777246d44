#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pzf/asymptotics.hpp"
#include "pzf/geometry.hpp"
#include "pzf/metrics.hpp"
#include "pzf/powerctl.hpp"

namespace pzf {

struct NullingRule {
  enum class Kind { Optimal, ScaledS, ExplicitD };
  Kind kind = Kind::Optimal;
  double s = 0.0;      // ScaledS
  double beta = 0.5;   // ScaledS
  double d_km = 0.0;   // ExplicitD
};

// Noise configuration; either direct coefficients or a cell-edge SNR
// calibration (P R^-alpha scaled by the reference antenna count for the
// scaled law).
struct NoiseConfig {
  NoiseLaw law = NoiseLaw::Scaled;
  double mu = 1.0;
  double zeta = 1.0;
  double sigma2 = 1.0;
  std::optional<double> edge_snr_db;
  int edge_snr_ref_l = 25;
};

enum class AllocationPolicy { EqualPower, TwoLevelWaterfill };

struct ScenarioConfig {
  double lambda_b = 30.0;
  int mobiles_per_bs = 3;
  double alpha = 4.0;
  double cell_radius = 0.15;
  double peak_power = 1.0;
  std::vector<int> antennas = {25, 50, 100, 200};
  NullingRule nulling;
  NoiseConfig noise;
  PlacementMode placement = PlacementMode::UniformDisk;
  AllocationPolicy allocation = AllocationPolicy::EqualPower;
  double target_bs_count = 200.0;  // sets the window side via sqrt(N / lambda_b)
  int trials = 5;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0: OpenMP default
  int powerctl_samples = 100000;
  int throughput_mc_samples = 200000;
  bool normalize_phi_unsquared = false;

  double window_side() const;
  NoiseModel noise_model() const;
  double effective_mu_at(int antennas) const;
  double nulling_s_at(int antennas) const;       // D(L)/sqrt(L)
  double nulling_radius_at(int antennas) const;  // D(L)
  AsymptoticParams asymptotic_params_at(int antennas) const;
  void validate() const;

  nlohmann::json to_json() const;
  static ScenarioConfig from_json(const nlohmann::json& j);
  std::string config_hash() const;  // 16 hex chars, FNV-1a over the canonical dump
};

// Broadcast water-filling state for one antenna count: every BS allocates
// locally from (g, level) and its own serving distances.
struct WaterfillContext {
  double g = 0.0;
  double level = 0.0;
  double mean_power = 0.0;
  double sample_rate = 0.0;  // R-breve(Pbar*) on the solving sample set
};

struct TrialOutput {
  int antennas = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  double activation_fraction = 0.0;
  double bs_throughput = 0.0;  // mean over BSs of the sum member rate
  double peak_excess = 0.0;
  std::vector<LinkMetrics> links;
};

// One full simulation pass: geometry, precoders, allocation, metrics.
TrialOutput run_trial(const ScenarioConfig& config, int antennas, int trial,
                      const std::optional<WaterfillContext>& waterfill);

WaterfillContext solve_waterfill_context(const ScenarioConfig& config, int antennas);

struct CampaignResult {
  std::vector<std::vector<TrialOutput>> by_antennas;  // [sweep index][trial]
  std::vector<std::optional<WaterfillContext>> contexts;
  int excluded_trials = 0;
  std::vector<nlohmann::json> exclusions;
};

CampaignResult run_campaign(const ScenarioConfig& config);

// Exact CSV schema; rows ordered by (L, trial, mobile), LF endings, doubles
// printed round-trip exact.
extern const char* const kCsvHeader;
std::string to_csv(const ScenarioConfig& config, const CampaignResult& result);

struct CsvRecord {
  std::string config_hash;
  int trial;
  int mobile_id;
  int antennas;
  double r_serving_km, signal, interference, sinr_db, norm_sinr_db, rate;
};
// throws on a malformed header or mixed config hashes
std::vector<CsvRecord> parse_csv(const std::string& text);

struct HistogramOutput {
  std::string csv;
  nlohmann::json summary;
};

HistogramOutput run_histogram_experiment(const ScenarioConfig& config);
HistogramOutput run_throughput_sweep(const ScenarioConfig& config);
nlohmann::json run_power_allocation_comparison(const ScenarioConfig& config);
nlohmann::json run_shotnoise_validation(std::uint64_t seed, int n_trials);

}  // namespace pzf
