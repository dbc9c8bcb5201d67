#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <string>
#include <vector>

#include "dsa/cognitive_engine.hpp"
#include "dsa/narx.hpp"
#include "dsa/playground.hpp"
#include "dsa/power_control.hpp"

namespace dsa {

enum class Policy {
  kPnOnly,
  kFmBaseline,
  kNnNoModChange,
  kNnRelChange2,
  kNnRelChange5,
  kNnRelChange10,
  kExhaustiveMin,
  kExhaustiveMax,
};

const char* policy_name(Policy p);
Policy policy_from_name(const std::string& name);
std::vector<Policy> all_policies();

struct AmcParams {
  double shannon_k = 1.0;
  double symbol_budget = 336000.0;
};

struct ExperimentParams {
  std::vector<double> loads{0.16, 0.32, 0.48, 0.64};
  int runs = 30;
  std::vector<Policy> policies = all_policies();
  std::uint64_t master_seed = 1u;
  std::vector<double> noise_grid_dbm;  // defaults to -130..-60 in 5 dB steps
  long exhaustive_cap = 200000;        // disable exhaustive above this many settings
  int train_scenarios_per_load = 6;
  int min_training_samples = 4000;
  int train_restarts = 5;  // independent inits; keep the best-validation model
  int jobs = 0;            // 0 -> hardware concurrency
};

// Whole-tool configuration; one structured file drives every subcommand.
struct SimConfig {
  PlaygroundConfig playground;
  AmcParams amc;
  NarxConfig narx;
  std::vector<double> probe_powers_dbm = PolicyConfig::default_probe_powers();
  std::vector<double> rel_change_deltas{0.02, 0.05, 0.10};
  int silent_warmup_steps = 16;
  ExperimentParams experiment;

  AmcTable amc_table() const;
  void validate() const;
};

SimConfig default_config();
SimConfig load_config_file(const std::string& path);  // JSON, partial keys allowed
std::string config_to_json(const SimConfig& cfg);

struct NoiseSweepRow {
  double load = 0.0;
  double noise_dbm = 0.0;
  double pn_kbps = 0.0;
  double rel_change = 0.0;  // vs the lowest-noise entry of the same load
};

// Primary-only noise robustness sweep. Scenario seeds depend on (seed, load,
// run) but not on the noise level, so each load is a paired comparison.
std::vector<NoiseSweepRow> run_noise_sweep(const SimConfig& cfg);

// Secondary trajectories under the fixed-target controller across all
// configured loads in equal proportion; every inner iteration contributes a
// (power, sensed type, true nearest-link throughput) sample. Each sequence
// opens with the forecaster's cold-start priming (warmup-length, input-only)
// and one true silent baseline observation, then the controller walk.
// Scenarios are appended until every load has at least
// train_scenarios_per_load and the total usable sample count reaches
// min_training_samples.
TrainingSet generate_training_data(const SimConfig& cfg);

struct ExhaustiveSetting {
  Eigen::VectorXd sn_dbm;
  std::vector<bool> sn_active;
  double pn_kbps = 0.0;
  double total_sn_mw = 0.0;
};

// Enumerates every per-secondary choice from (schedule levels + off), keeps
// the settings that leave the modulation type at baseline on every guarded
// link — the links that are some secondary's nearest, i.e. the same set the
// distributed controllers watch — and returns the PN-average-throughput
// minimizer and maximizer over all primary links (ties to the lower total
// transmit power). The all-off setting is always feasible.
struct ExhaustiveResult {
  ExhaustiveSetting min_setting;
  ExhaustiveSetting max_setting;
  long evaluated = 0;
  bool enabled = true;
};
ExhaustiveResult exhaustive_baselines(const ChannelGains& g,
                                      const Eigen::VectorXd& pn_dbm,
                                      const std::vector<int>& nearest,
                                      const std::vector<double>& schedule_dbm,
                                      const AmcTable& table,
                                      const PlaygroundConfig& cfg,
                                      double noise_mw, long cap);

struct McRow {
  Policy policy{};
  double load = 0.0;
  int run = 0;
  double pn_kbps = 0.0;
  double rel_change = 0.0;
  double sn_kbps = 0.0;
  double blocked_frac = 0.0;
};

struct McResult {
  std::vector<McRow> rows;
  // Per (policy, load): one throughput sample per secondary per run.
  std::map<std::pair<Policy, double>, std::vector<double>> sn_samples;
  // Per (policy, load): absolute CQI error counts at the selected settings,
  // bins 0,1,2,3+ (filled for the prediction-driven policies).
  std::map<std::pair<Policy, double>, std::array<long, 4>> cqi_error_counts;
};

// Full Monte Carlo comparison. The model may be null when no prediction-driven
// policy is requested.
McResult run_monte_carlo(const SimConfig& cfg, const NarxModel* model);

struct CdfRow {
  Policy policy{};
  double load = 0.0;
  double throughput_kbps = 0.0;
  double cdf = 0.0;
};
std::vector<CdfRow> sn_throughput_cdf(const McResult& mc);

struct HistRow {
  double load = 0.0;
  int abs_error = 0;  // 3 means "3 or more"
  double freq = 0.0;
};

/// One-step-ahead forecast quality on the held-out test blocks: every scored
// step is predicted from the true recorded history, quantized to the nearest
// mode and absolute-differenced against the true CQI; only test-block steps
// are scored, grouped by the sequence's load.
std::vector<HistRow> cqi_error_histogram(const NarxModel& m,
                                         const TrainingSet& data,
                                         const SimConfig& cfg);

void write_noise_sweep_csv(const std::vector<NoiseSweepRow>& rows,
                           std::ostream& os);
void write_monte_carlo_csv(const std::vector<McRow>& rows, std::ostream& os);
void write_sn_cdf_csv(const std::vector<CdfRow>& rows, std::ostream& os);
void write_cqi_hist_csv(const std::vector<HistRow>& rows, std::ostream& os);

}  // namespace dsa
