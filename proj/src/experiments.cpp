#include "pzf/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "pzf/shotnoise.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pzf {

namespace {
constexpr double kPi = 3.14159265358979323846;

double to_db(double x) { return 10.0 * std::log10(x); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

double ScenarioConfig::window_side() const { return std::sqrt(target_bs_count / lambda_b); }

NoiseModel ScenarioConfig::noise_model() const {
  NoiseModel m;
  m.law = noise.law;
  m.mu = noise.mu;
  m.zeta = noise.zeta;
  m.sigma2 = noise.sigma2;
  if (noise.edge_snr_db) {
    const double snr = std::pow(10.0, *noise.edge_snr_db / 10.0);
    const double edge_rx = peak_power * std::pow(cell_radius, -alpha);
    if (noise.law == NoiseLaw::Fixed) {
      m.sigma2 = edge_rx / snr;
    } else {
      m.mu = std::pow(static_cast<double>(noise.edge_snr_ref_l), 0.5 * alpha - 1.0) * edge_rx / snr;
      m.zeta = 0.5 * alpha - 1.0;
    }
  }
  return m;
}

double ScenarioConfig::effective_mu_at(int l) const { return effective_mu(noise_model(), l, alpha); }

double ScenarioConfig::nulling_s_at(int l) const {
  return nulling_radius_at(l) / std::sqrt(static_cast<double>(l));
}

double ScenarioConfig::nulling_radius_at(int l) const {
  switch (nulling.kind) {
    case NullingRule::Kind::ExplicitD:
      return nulling.d_km;
    case NullingRule::Kind::ScaledS:
      return nulling.s * std::pow(static_cast<double>(l), nulling.beta);
    case NullingRule::Kind::Optimal: {
      AsymptoticParams p;
      p.lambda_b = lambda_b;
      p.mobiles_per_bs = mobiles_per_bs;
      p.alpha = alpha;
      p.mu = effective_mu_at(l);
      p.mean_power = peak_power;
      p.peak_power = peak_power;
      p.cell_radius = cell_radius;
      return solve_optimal_s(p) * std::sqrt(static_cast<double>(l));
    }
  }
  return 0.0;
}

AsymptoticParams ScenarioConfig::asymptotic_params_at(int l) const {
  AsymptoticParams p;
  p.lambda_b = lambda_b;
  p.mobiles_per_bs = mobiles_per_bs;
  p.alpha = alpha;
  p.s = nulling_s_at(l);
  p.beta = 0.5;
  p.mu = effective_mu_at(l);
  p.zeta = 0.5 * alpha - 1.0;
  p.mean_power = peak_power;
  p.peak_power = peak_power;
  p.cell_radius = cell_radius;
  return p;
}

void ScenarioConfig::validate() const {
  if (!(alpha > 2.0)) throw std::invalid_argument("config: alpha must exceed 2");
  if (!(lambda_b > 0.0)) throw std::invalid_argument("config: lambda_b must be positive");
  if (mobiles_per_bs < 1) throw std::invalid_argument("config: mobiles_per_bs must be >= 1");
  if (!(cell_radius > 0.0)) throw std::invalid_argument("config: cell_radius must be positive");
  if (!(peak_power > 0.0)) throw std::invalid_argument("config: peak_power must be positive");
  if (antennas.empty()) throw std::invalid_argument("config: antenna sweep is empty");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  const double side = window_side();
  for (int l : antennas) {
    if (l < mobiles_per_bs)
      throw std::invalid_argument("config: antennas must be >= mobiles_per_bs");
    // wrap aliasing of the nulling disk must be impossible
    if (4.0 * nulling_radius_at(l) > side)
      throw std::invalid_argument("config: window side must be >= 4 D over the sweep");
    if (!(noise_variance(noise_model(), l) > 0.0))
      throw std::invalid_argument("config: noise variance must be positive at every L");
  }
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["lambda_b"] = lambda_b;
  j["mobiles_per_bs"] = mobiles_per_bs;
  j["alpha"] = alpha;
  j["cell_radius_km"] = cell_radius;
  j["peak_power"] = peak_power;
  j["antennas"] = antennas;
  switch (nulling.kind) {
    case NullingRule::Kind::Optimal:
      j["nulling"] = {{"mode", "optimal"}};
      break;
    case NullingRule::Kind::ScaledS:
      j["nulling"] = {{"mode", "scaled_s"}, {"s", nulling.s}, {"beta", nulling.beta}};
      break;
    case NullingRule::Kind::ExplicitD:
      j["nulling"] = {{"mode", "explicit_d"}, {"d_km", nulling.d_km}};
      break;
  }
  nlohmann::json n;
  n["law"] = noise.law == NoiseLaw::Scaled ? "scaled" : "fixed";
  if (noise.edge_snr_db) {
    n["edge_snr_db"] = *noise.edge_snr_db;
    n["edge_snr_ref_l"] = noise.edge_snr_ref_l;
  } else if (noise.law == NoiseLaw::Scaled) {
    n["mu"] = noise.mu;
    n["zeta"] = noise.zeta;
  } else {
    n["sigma2"] = noise.sigma2;
  }
  j["noise"] = n;
  j["placement"] = placement == PlacementMode::CellEdge ? "cell_edge" : "uniform_disk";
  j["allocation"] = allocation == AllocationPolicy::EqualPower ? "equal" : "waterfill";
  j["target_bs_count"] = target_bs_count;
  j["trials"] = trials;
  j["seed"] = master_seed;
  j["powerctl_samples"] = powerctl_samples;
  j["throughput_mc_samples"] = throughput_mc_samples;
  j["normalize_phi_unsquared"] = normalize_phi_unsquared;
  return j;
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  if (j.contains("lambda_b")) c.lambda_b = j["lambda_b"];
  if (j.contains("mobiles_per_bs")) c.mobiles_per_bs = j["mobiles_per_bs"];
  if (j.contains("alpha")) c.alpha = j["alpha"];
  if (j.contains("cell_radius_km")) c.cell_radius = j["cell_radius_km"];
  if (j.contains("peak_power")) c.peak_power = j["peak_power"];
  if (j.contains("antennas")) c.antennas = j["antennas"].get<std::vector<int>>();
  if (j.contains("nulling")) {
    const auto& n = j["nulling"];
    const std::string mode = n.value("mode", "optimal");
    if (mode == "optimal") {
      c.nulling.kind = NullingRule::Kind::Optimal;
    } else if (mode == "scaled_s") {
      c.nulling.kind = NullingRule::Kind::ScaledS;
      c.nulling.s = n.at("s");
      c.nulling.beta = n.value("beta", 0.5);
    } else if (mode == "explicit_d") {
      c.nulling.kind = NullingRule::Kind::ExplicitD;
      c.nulling.d_km = n.at("d_km");
    } else {
      throw std::invalid_argument("config: unknown nulling mode " + mode);
    }
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    const std::string law = n.value("law", "scaled");
    if (law == "scaled")
      c.noise.law = NoiseLaw::Scaled;
    else if (law == "fixed")
      c.noise.law = NoiseLaw::Fixed;
    else
      throw std::invalid_argument("config: unknown noise law " + law);
    if (n.contains("edge_snr_db")) {
      c.noise.edge_snr_db = n["edge_snr_db"].get<double>();
      c.noise.edge_snr_ref_l = n.value("edge_snr_ref_l", 25);
    } else {
      c.noise.edge_snr_db.reset();
      c.noise.mu = n.value("mu", 1.0);
      c.noise.zeta = n.value("zeta", 1.0);
      c.noise.sigma2 = n.value("sigma2", 1.0);
    }
  }
  if (j.contains("placement")) {
    const std::string p = j["placement"];
    if (p == "cell_edge")
      c.placement = PlacementMode::CellEdge;
    else if (p == "uniform_disk")
      c.placement = PlacementMode::UniformDisk;
    else
      throw std::invalid_argument("config: unknown placement " + p);
  }
  if (j.contains("allocation")) {
    const std::string a = j["allocation"];
    if (a == "equal")
      c.allocation = AllocationPolicy::EqualPower;
    else if (a == "waterfill")
      c.allocation = AllocationPolicy::TwoLevelWaterfill;
    else
      throw std::invalid_argument("config: unknown allocation " + a);
  }
  if (j.contains("target_bs_count")) c.target_bs_count = j["target_bs_count"];
  if (j.contains("trials")) c.trials = j["trials"];
  if (j.contains("seed")) c.master_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("workers")) c.workers = j["workers"];
  if (j.contains("powerctl_samples")) c.powerctl_samples = j["powerctl_samples"];
  if (j.contains("throughput_mc_samples")) c.throughput_mc_samples = j["throughput_mc_samples"];
  if (j.contains("normalize_phi_unsquared")) c.normalize_phi_unsquared = j["normalize_phi_unsquared"];
  return c;
}

std::string ScenarioConfig::config_hash() const {
  const std::string dump = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

WaterfillContext solve_waterfill_context(const ScenarioConfig& config, int antennas) {
  const AsymptoticParams p = config.asymptotic_params_at(antennas);
  const PowerPolicyResult r =
      optimize_mean_power(p, antennas, config.placement, config.powerctl_samples,
                          derive_seed(config.master_seed, static_cast<std::uint64_t>(antennas)));
  return {r.g, r.level, r.mean_power, r.rate};
}

TrialOutput run_trial(const ScenarioConfig& config, int antennas, int trial,
                      const std::optional<WaterfillContext>& waterfill) {
  TrialOutput out;
  out.antennas = antennas;
  out.trial = trial;
  out.seed = derive_seed(config.master_seed, stream::kTrial, static_cast<std::uint64_t>(antennas),
                         static_cast<std::uint64_t>(trial));

  GeometryParams gp{TorusWindow(config.window_side())};
  gp.bs_density = config.lambda_b;
  gp.mobiles_per_bs = config.mobiles_per_bs;
  gp.cell_radius = config.cell_radius;
  gp.nulling_radius = config.nulling_radius_at(antennas);
  gp.placement = config.placement;

  const NetworkRealization net = build_realization(gp, out.seed);
  const FadingSource fading(out.seed, 0);
  const PrecoderSet precoders = build_precoders(net, fading, antennas);

  PowerAllocation alloc;
  if (!waterfill) {
    alloc = PowerAllocation::equal(net, config.peak_power);
  } else {
    alloc.phi_sq.resize(net.mobile_count());
    WaterfillProblem prob;
    prob.peak_power = config.peak_power;
    prob.gains.resize(config.mobiles_per_bs);
    for (int k = 0; k < net.bs_count(); ++k) {
      for (int m = 0; m < config.mobiles_per_bs; ++m)
        prob.gains[m] = waterfill->g *
                        std::pow(net.serving_distance_km[k * config.mobiles_per_bs + m],
                                 -config.alpha);
      const std::vector<double> powers = allocate(waterfill->level, prob);
      for (int m = 0; m < config.mobiles_per_bs; ++m)
        alloc.phi_sq[k * config.mobiles_per_bs + m] = powers[m];
    }
  }
  out.peak_excess = alloc.peak_excess(net, config.peak_power);

  MetricsOptions opt;
  opt.antennas = antennas;
  opt.alpha = config.alpha;
  opt.sigma2 = noise_variance(config.noise_model(), antennas);
  opt.normalize_phi_unsquared = config.normalize_phi_unsquared;

  const LinkMetricsSet metrics = compute_link_metrics(net, precoders, alloc, fading, opt);
  out.activation_fraction = metrics.activation_fraction;
  out.links = metrics.per_mobile;

  double total_rate = 0.0;
  for (const auto& link : out.links) total_rate += link.rate;
  out.bs_throughput = net.bs_count() > 0 ? total_rate / net.bs_count() : 0.0;
  return out;
}

CampaignResult run_campaign(const ScenarioConfig& config) {
  config.validate();
  const int n_l = static_cast<int>(config.antennas.size());

  CampaignResult result;
  result.contexts.resize(n_l);
  result.by_antennas.assign(n_l, std::vector<TrialOutput>(config.trials));

  if (config.allocation == AllocationPolicy::TwoLevelWaterfill) {
    for (int li = 0; li < n_l; ++li)
      result.contexts[li] = solve_waterfill_context(config, config.antennas[li]);
  }

  const int jobs = n_l * config.trials;
  const int threads = config.workers > 0 ? config.workers : 0;
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#else
  const int nt = 1;
  (void)threads;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int job = 0; job < jobs; ++job) {
    const int li = job / config.trials;
    const int trial = job % config.trials;
    try {
      result.by_antennas[li][trial] =
          run_trial(config, config.antennas[li], trial, result.contexts[li]);
    } catch (const ProjectionCollapse&) {
      TrialOutput failed;
      failed.antennas = config.antennas[li];
      failed.trial = trial;
      failed.seed = derive_seed(config.master_seed, stream::kTrial,
                                static_cast<std::uint64_t>(config.antennas[li]),
                                static_cast<std::uint64_t>(trial));
      failed.failed = true;
      result.by_antennas[li][trial] = std::move(failed);
    }
  }

  for (int li = 0; li < n_l; ++li)
    for (int t = 0; t < config.trials; ++t)
      if (result.by_antennas[li][t].failed) {
        ++result.excluded_trials;
        result.exclusions.push_back({{"antennas", config.antennas[li]},
                                     {"trial", t},
                                     {"seed", result.by_antennas[li][t].seed}});
      }
  // a trickle of numerical failures is tolerated; more fails the campaign
  if (result.excluded_trials > 0 &&
      result.excluded_trials > 0.001 * static_cast<double>(jobs))
    throw std::runtime_error("campaign: excluded trial fraction exceeds 0.1%");
  return result;
}

const char* const kCsvHeader =
    "config_hash,trial,mobile_id,L,r_serving_km,S,I,sinr_db,norm_sinr_db,rate_bps_hz";

std::string to_csv(const ScenarioConfig& config, const CampaignResult& result) {
  const std::string hash = config.config_hash();
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& trials : result.by_antennas) {
    for (const auto& trial : trials) {
      if (trial.failed) continue;
      for (std::size_t j = 0; j < trial.links.size(); ++j) {
        const auto& link = trial.links[j];
        out += hash;
        out += ',';
        out += std::to_string(trial.trial);
        out += ',';
        out += std::to_string(j);
        out += ',';
        out += std::to_string(trial.antennas);
        out += ',';
        out += format_double(link.serving_distance_km);
        out += ',';
        out += format_double(link.signal);
        out += ',';
        out += format_double(link.interference);
        out += ',';
        out += format_double(to_db(link.sinr));
        out += ',';
        out += format_double(to_db(link.norm_sinr));
        out += ',';
        out += format_double(link.rate);
        out += '\n';
      }
    }
  }
  return out;
}

std::vector<CsvRecord> parse_csv(const std::string& text) {
  std::vector<CsvRecord> records;
  std::size_t pos = 0;
  auto next_line = [&](std::string& line) {
    if (pos >= text.size()) return false;
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      line = text.substr(pos);
      pos = text.size();
    } else {
      line = text.substr(pos, eol - pos);
      pos = eol + 1;
    }
    return true;
  };
  std::string line;
  if (!next_line(line) || line != kCsvHeader)
    throw std::invalid_argument("parse_csv: bad header");
  while (next_line(line)) {
    if (line.empty()) continue;
    CsvRecord r;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 10) throw std::invalid_argument("parse_csv: bad field count");
    r.config_hash = fields[0];
    r.trial = std::stoi(fields[1]);
    r.mobile_id = std::stoi(fields[2]);
    r.antennas = std::stoi(fields[3]);
    r.r_serving_km = std::strtod(fields[4].c_str(), nullptr);
    r.signal = std::strtod(fields[5].c_str(), nullptr);
    r.interference = std::strtod(fields[6].c_str(), nullptr);
    r.sinr_db = std::strtod(fields[7].c_str(), nullptr);
    r.norm_sinr_db = std::strtod(fields[8].c_str(), nullptr);
    r.rate = std::strtod(fields[9].c_str(), nullptr);
    if (!records.empty() && r.config_hash != records.front().config_hash)
      throw std::invalid_argument("parse_csv: mixed config hashes");
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

struct LAggregates {
  double reference = 0.0;
  double frac2 = 0.0, frac6 = 0.0;
  double mean_db = 0.0, median_db = 0.0, p05_db = 0.0, p95_db = 0.0;
  double outage = 0.0;
  int samples = 0;
};

LAggregates aggregate_norm_sinr(const std::vector<TrialOutput>& trials, double reference) {
  LAggregates agg;
  agg.reference = reference;
  const double ref_db = to_db(reference);
  std::vector<double> db;
  int total = 0, outage = 0, within2 = 0, within6 = 0;
  for (const auto& t : trials) {
    if (t.failed) continue;
    for (const auto& link : t.links) {
      ++total;
      const double v = to_db(link.norm_sinr);
      if (!std::isfinite(v)) {
        ++outage;
        continue;
      }
      db.push_back(v);
      const double dev = std::fabs(v - ref_db);
      if (dev <= 2.0) ++within2;
      if (dev <= 6.0) ++within6;
    }
  }
  agg.samples = total;
  if (total > 0) {
    agg.frac2 = static_cast<double>(within2) / total;
    agg.frac6 = static_cast<double>(within6) / total;
    agg.outage = static_cast<double>(outage) / total;
  }
  if (!db.empty()) {
    std::sort(db.begin(), db.end());
    double acc = 0.0;
    for (double v : db) acc += v;
    agg.mean_db = acc / db.size();
    agg.median_db = db[db.size() / 2];
    agg.p05_db = db[static_cast<std::size_t>(0.05 * (db.size() - 1))];
    agg.p95_db = db[static_cast<std::size_t>(0.95 * (db.size() - 1))];
  }
  return agg;
}

nlohmann::json per_l_summary(const ScenarioConfig& config, const CampaignResult& result, int li) {
  const int l = config.antennas[li];
  const auto& trials = result.by_antennas[li];
  const AsymptoticParams params = config.asymptotic_params_at(l);
  const double reference = finite_L_normalized_prediction(params, params.mu);
  const LAggregates agg = aggregate_norm_sinr(trials, reference);

  double act = 0.0, tput = 0.0;
  int ok = 0;
  std::vector<double> per_trial_tput, per_trial_act;
  for (const auto& t : trials) {
    if (t.failed) continue;
    act += t.activation_fraction;
    tput += t.bs_throughput;
    per_trial_tput.push_back(t.bs_throughput);
    per_trial_act.push_back(t.activation_fraction);
    ++ok;
  }
  if (ok > 0) {
    act /= ok;
    tput /= ok;
  }

  nlohmann::json j;
  j["L"] = l;
  j["s"] = config.nulling_s_at(l);
  j["D_km"] = config.nulling_radius_at(l);
  j["sigma2"] = noise_variance(config.noise_model(), l);
  j["mu_effective"] = params.mu;
  j["reference_value"] = agg.reference;
  j["reference_db"] = to_db(agg.reference);
  j["mean"] = agg.mean_db;
  j["median"] = agg.median_db;
  j["p05"] = agg.p05_db;
  j["p95"] = agg.p95_db;
  j["frac_within_2db"] = agg.frac2;
  j["frac_within_6db"] = agg.frac6;
  j["outage_fraction"] = agg.outage;
  j["samples"] = agg.samples;
  j["activation_fraction"] = act;
  j["mean_bs_throughput"] = tput;
  j["per_trial_bs_throughput"] = per_trial_tput;
  j["per_trial_activation"] = per_trial_act;
  if (result.contexts[li]) {
    j["waterfill"] = {{"g", result.contexts[li]->g},
                      {"level", result.contexts[li]->level},
                      {"mean_power", result.contexts[li]->mean_power},
                      {"sample_rate", result.contexts[li]->sample_rate}};
  }
  return j;
}

nlohmann::json campaign_summary(const ScenarioConfig& config, const CampaignResult& result,
                                double runtime_seconds) {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["config_hash"] = config.config_hash();
  j["excluded_trials"] = result.excluded_trials;
  j["exclusions"] = result.exclusions;
  j["runtime_seconds"] = runtime_seconds;
  nlohmann::json per_l = nlohmann::json::array();
  for (std::size_t li = 0; li < config.antennas.size(); ++li)
    per_l.push_back(per_l_summary(config, result, static_cast<int>(li)));
  j["results"] = per_l;
  return j;
}

}  // namespace

HistogramOutput run_histogram_experiment(const ScenarioConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignResult result = run_campaign(config);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {to_csv(config, result), campaign_summary(config, result, dt)};
}

HistogramOutput run_throughput_sweep(const ScenarioConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignResult result = run_campaign(config);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json summary = campaign_summary(config, result, dt);
  for (std::size_t li = 0; li < config.antennas.size(); ++li) {
    const int l = config.antennas[li];
    AsymptoticParams p = config.asymptotic_params_at(l);
    AllocationRule rule;
    if (result.contexts[li]) {
      p.mean_power = result.contexts[li]->mean_power;
      const WaterfillContext ctx = *result.contexts[li];
      const double alpha = config.alpha;
      const double peak = config.peak_power;
      rule = [ctx, alpha, peak](const std::vector<double>& r) {
        WaterfillProblem prob;
        prob.peak_power = peak;
        prob.gains.resize(r.size());
        for (std::size_t m = 0; m < r.size(); ++m)
          prob.gains[m] = ctx.g * std::pow(r[m], -alpha);
        return allocate(ctx.level, prob);
      };
    } else {
      const std::vector<double> eq = equal_power(config.mobiles_per_bs, config.peak_power);
      rule = [eq](const std::vector<double>&) { return eq; };
    }
    const ThroughputEstimate r_as = asymptotic_throughput(
        p, l, rule, config.placement, config.throughput_mc_samples,
        derive_seed(config.master_seed, stream::kThroughputMc, static_cast<std::uint64_t>(l)));
    auto& entry = summary["results"][li];
    entry["r_as"] = r_as.mean;
    entry["r_as_std_error"] = r_as.std_error;
    const double emp = entry["mean_bs_throughput"];
    entry["relative_gap"] = r_as.mean != 0.0 ? std::fabs(emp - r_as.mean) / r_as.mean : 0.0;
  }
  return {to_csv(config, result), summary};
}

nlohmann::json run_power_allocation_comparison(const ScenarioConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioConfig equal_cfg = config;
  equal_cfg.allocation = AllocationPolicy::EqualPower;
  ScenarioConfig wf_cfg = config;
  wf_cfg.allocation = AllocationPolicy::TwoLevelWaterfill;

  const CampaignResult equal_run = run_campaign(equal_cfg);
  const CampaignResult wf_run = run_campaign(wf_cfg);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json j;
  j["config"] = config.to_json();
  j["runtime_seconds"] = dt;
  j["excluded_trials"] = equal_run.excluded_trials + wf_run.excluded_trials;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t li = 0; li < config.antennas.size(); ++li) {
    auto mean_tput = [&](const CampaignResult& r) {
      double acc = 0.0;
      int n = 0;
      for (const auto& t : r.by_antennas[li])
        if (!t.failed) {
          acc += t.bs_throughput;
          ++n;
        }
      return n ? acc / n : 0.0;
    };
    const double eq = mean_tput(equal_run);
    const double wf = mean_tput(wf_run);
    nlohmann::json row;
    row["L"] = config.antennas[li];
    row["equal_power_sum_se"] = eq;
    row["waterfill_sum_se"] = wf;
    row["gap_percent"] = eq > 0.0 ? 100.0 * (wf / eq - 1.0) : 0.0;
    if (wf_run.contexts[li]) {
      row["waterfill_mean_power"] = wf_run.contexts[li]->mean_power;
      row["waterfill_level"] = wf_run.contexts[li]->level;
      row["waterfill_g"] = wf_run.contexts[li]->g;
    }
    rows.push_back(row);
  }
  j["results"] = rows;
  return j;
}

nlohmann::json run_shotnoise_validation(std::uint64_t seed, int n_trials) {
  struct Case {
    const char* name;
    ShotNoiseSpec spec;
    const char* expect;  // TIGHT, BOUNDED_ABOVE, BOUNDED_BELOW, ZERO
  };
  std::vector<Case> cases;
  cases.push_back({"independent_marks", independent_exponential_fixture(0.5, 12.0), "TIGHT"});
  cases.push_back(
      {"shared_factor_upper", shared_factor_fixture(0.5, 12.0, 1.0, true), "BOUNDED_ABOVE"});
  cases.push_back(
      {"shared_factor_lower", shared_factor_fixture(0.5, 12.0, 1.0, false), "BOUNDED_BELOW"});
  cases.push_back({"zero_marks", zero_mark_fixture(0.5, 12.0), "ZERO"});
  cases.push_back({"pzf_interference", pzf_power_fixture(0.1, 4.0, 0.7, 1.0, 1.0, 50.0), "TIGHT"});

  nlohmann::json rows = nlohmann::json::array();
  bool all_ok = true;
  for (auto& c : cases) {
    const BoundResult bound = joint_moment_bound(c.spec);
    const MomentEstimate est = estimate_joint_moment(c.spec, n_trials, derive_seed(seed, rows.size()));
    bool ok = false;
    const std::string expect = c.expect;
    if (expect == "TIGHT")
      ok = std::fabs(est.mean - bound.value) <= 3.0 * est.std_error + bound.tail_estimate;
    else if (expect == "BOUNDED_ABOVE")
      ok = est.mean <= bound.value + 3.0 * est.std_error + bound.tail_estimate;
    else if (expect == "BOUNDED_BELOW")
      ok = est.mean >= bound.value - 3.0 * est.std_error - bound.tail_estimate;
    else
      ok = est.mean == 0.0 && bound.value == 0.0;
    all_ok = all_ok && ok;
    rows.push_back({{"fixture", c.name},
                    {"bound", bound.value},
                    {"tail_estimate", bound.tail_estimate},
                    {"estimate", est.mean},
                    {"std_error", est.std_error},
                    {"n_trials", est.n_trials},
                    {"expectation", c.expect},
                    {"verdict", ok ? "PASS" : "FAIL"}});
  }
  nlohmann::json j;
  j["results"] = rows;
  j["all_pass"] = all_ok;
  return j;
}

}  // namespace pzf
