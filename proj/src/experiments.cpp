#include "dsa/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dsa/util.hpp"

namespace dsa {

namespace {
using nlohmann::json;
}

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::kPnOnly:
      return "pn_only";
    case Policy::kFmBaseline:
      return "fm_baseline";
    case Policy::kNnNoModChange:
      return "nn_no_mod_change";
    case Policy::kNnRelChange2:
      return "nn_rel_change_2";
    case Policy::kNnRelChange5:
      return "nn_rel_change_5";
    case Policy::kNnRelChange10:
      return "nn_rel_change_10";
    case Policy::kExhaustiveMin:
      return "exhaustive_min";
    case Policy::kExhaustiveMax:
      return "exhaustive_max";
  }
  throw std::invalid_argument("unknown policy");
}

Policy policy_from_name(const std::string& name) {
  for (Policy p : all_policies())
    if (name == policy_name(p)) return p;
  throw std::invalid_argument("unknown policy name: " + name);
}

std::vector<Policy> all_policies() {
  return {Policy::kPnOnly,        Policy::kFmBaseline,
          Policy::kNnNoModChange, Policy::kNnRelChange2,
          Policy::kNnRelChange5,  Policy::kNnRelChange10,
          Policy::kExhaustiveMin, Policy::kExhaustiveMax};
}

AmcTable SimConfig::amc_table() const {
  return default_amc_table(amc.shannon_k, amc.symbol_budget);
}

void SimConfig::validate() const {
  playground.validate();
  narx.validate();
  if (!(amc.shannon_k > 0.0) || !(amc.symbol_budget > 0.0))
    throw std::invalid_argument("bad link-adaptation parameters");
  if (probe_powers_dbm.empty())
    throw std::invalid_argument("probe schedule is empty");
  for (std::size_t i = 0; i < probe_powers_dbm.size(); ++i) {
    if (i > 0 && !(probe_powers_dbm[i] > probe_powers_dbm[i - 1]))
      throw std::invalid_argument("probe schedule must ascend");
    if (probe_powers_dbm[i] < playground.sn_power_min_dbm - 1e-9 ||
        probe_powers_dbm[i] > playground.sn_power_max_dbm + 1e-9)
      throw std::invalid_argument("probe level outside the secondary range");
  }
  if (rel_change_deltas.size() != 3)
    throw std::invalid_argument("exactly three relative-change deltas");
  for (std::size_t i = 0; i < rel_change_deltas.size(); ++i) {
    if (!(rel_change_deltas[i] > 0.0))
      throw std::invalid_argument("relative-change delta must be positive");
    if (i > 0 && !(rel_change_deltas[i] > rel_change_deltas[i - 1]))
      throw std::invalid_argument("relative-change deltas must ascend");
  }
  if (silent_warmup_steps < narx.warmup())
    throw std::invalid_argument("silent warmup shorter than the delay lines");
  if (experiment.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (experiment.loads.empty()) throw std::invalid_argument("no loads");
  for (double load : experiment.loads) {
    double n_p = load * playground.bs_count();
    if (!(load > 0.0) || std::fabs(n_p - std::round(n_p)) > 1e-9 ||
        std::lround(n_p) < 1)
      throw std::invalid_argument(
          "each load times the station count must be a positive integer");
  }
  if (experiment.exhaustive_cap < 1)
    throw std::invalid_argument("exhaustive cap must be >= 1");
  if (experiment.train_scenarios_per_load < 1 ||
      experiment.min_training_samples < 1)
    throw std::invalid_argument("bad training-data sizing");
  if (experiment.train_restarts < 1)
    throw std::invalid_argument("train_restarts must be >= 1");
  if (experiment.jobs < 0) throw std::invalid_argument("jobs must be >= 0");
}

SimConfig default_config() {
  SimConfig cfg;
  cfg.experiment.noise_grid_dbm.clear();
  for (double n = -130.0; n <= -60.0 + 1e-9; n += 5.0)
    cfg.experiment.noise_grid_dbm.push_back(n);
  return cfg;
}

namespace {

void merge_playground(PlaygroundConfig& p, const json& j) {
  p.grid_side = j.value("grid_side", p.grid_side);
  p.bs_spacing_m = j.value("bs_spacing_m", p.bs_spacing_m);
  p.su_pair_count = j.value("su_pair_count", p.su_pair_count);
  p.su_link_radius_m = j.value("su_link_radius_m", p.su_link_radius_m);
  p.noise_power_dbm = j.value("noise_power_dbm", p.noise_power_dbm);
  p.pn_power_min_dbm = j.value("pn_power_min_dbm", p.pn_power_min_dbm);
  p.pn_power_max_dbm = j.value("pn_power_max_dbm", p.pn_power_max_dbm);
  p.sn_power_min_dbm = j.value("sn_power_min_dbm", p.sn_power_min_dbm);
  p.sn_power_max_dbm = j.value("sn_power_max_dbm", p.sn_power_max_dbm);
  p.penetration_loss_db = j.value("penetration_loss_db", p.penetration_loss_db);
  p.shadowing_sigma_db = j.value("shadowing_sigma_db", p.shadowing_sigma_db);
}

void merge_narx(NarxConfig& n, const json& j) {
  n.hidden_nodes = j.value("hidden_nodes", n.hidden_nodes);
  n.d_u1 = j.value("d_u1", n.d_u1);
  n.d_u2 = j.value("d_u2", n.d_u2);
  n.d_y = j.value("d_y", n.d_y);
  n.lm_lambda0 = j.value("lm_lambda0", n.lm_lambda0);
  n.lm_lambda_up = j.value("lm_lambda_up", n.lm_lambda_up);
  n.lm_lambda_down = j.value("lm_lambda_down", n.lm_lambda_down);
  n.lm_max_rejections = j.value("lm_max_rejections", n.lm_max_rejections);
  n.max_epochs = j.value("max_epochs", n.max_epochs);
  n.early_stop_patience = j.value("early_stop_patience", n.early_stop_patience);
}

void merge_experiment(ExperimentParams& e, const json& j) {
  if (j.contains("loads")) e.loads = j.at("loads").get<std::vector<double>>();
  e.runs = j.value("runs", e.runs);
  if (j.contains("policies")) {
    e.policies.clear();
    for (const auto& name : j.at("policies"))
      e.policies.push_back(policy_from_name(name.get<std::string>()));
  }
  e.master_seed = j.value("master_seed", e.master_seed);
  if (j.contains("noise_grid_dbm"))
    e.noise_grid_dbm = j.at("noise_grid_dbm").get<std::vector<double>>();
  e.exhaustive_cap = j.value("exhaustive_cap", e.exhaustive_cap);
  e.train_scenarios_per_load =
      j.value("train_scenarios_per_load", e.train_scenarios_per_load);
  e.min_training_samples =
      j.value("min_training_samples", e.min_training_samples);
  e.train_restarts = j.value("train_restarts", e.train_restarts);
  e.jobs = j.value("jobs", e.jobs);
}

}  // namespace

SimConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  SimConfig cfg = default_config();
  try {
    if (j.contains("playground")) merge_playground(cfg.playground, j["playground"]);
    if (j.contains("amc")) {
      cfg.amc.shannon_k = j["amc"].value("shannon_k", cfg.amc.shannon_k);
      cfg.amc.symbol_budget =
          j["amc"].value("symbol_budget", cfg.amc.symbol_budget);
    }
    if (j.contains("narx")) merge_narx(cfg.narx, j["narx"]);
    if (j.contains("probe_powers_dbm"))
      cfg.probe_powers_dbm = j["probe_powers_dbm"].get<std::vector<double>>();
    if (j.contains("rel_change_deltas"))
      cfg.rel_change_deltas = j["rel_change_deltas"].get<std::vector<double>>();
    cfg.silent_warmup_steps =
        j.value("silent_warmup_steps", cfg.silent_warmup_steps);
    if (j.contains("experiment")) merge_experiment(cfg.experiment, j["experiment"]);
  } catch (const json::exception& e) {
    throw std::runtime_error("config field error in " + path + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const SimConfig& cfg) {
  json j;
  const PlaygroundConfig& p = cfg.playground;
  j["playground"] = {{"grid_side", p.grid_side},
                     {"bs_spacing_m", p.bs_spacing_m},
                     {"su_pair_count", p.su_pair_count},
                     {"su_link_radius_m", p.su_link_radius_m},
                     {"noise_power_dbm", p.noise_power_dbm},
                     {"pn_power_min_dbm", p.pn_power_min_dbm},
                     {"pn_power_max_dbm", p.pn_power_max_dbm},
                     {"sn_power_min_dbm", p.sn_power_min_dbm},
                     {"sn_power_max_dbm", p.sn_power_max_dbm},
                     {"penetration_loss_db", p.penetration_loss_db},
                     {"shadowing_sigma_db", p.shadowing_sigma_db}};
  j["amc"] = {{"shannon_k", cfg.amc.shannon_k},
              {"symbol_budget", cfg.amc.symbol_budget}};
  const NarxConfig& n = cfg.narx;
  j["narx"] = {{"hidden_nodes", n.hidden_nodes},
               {"d_u1", n.d_u1},
               {"d_u2", n.d_u2},
               {"d_y", n.d_y},
               {"lm_lambda0", n.lm_lambda0},
               {"lm_lambda_up", n.lm_lambda_up},
               {"lm_lambda_down", n.lm_lambda_down},
               {"lm_max_rejections", n.lm_max_rejections},
               {"max_epochs", n.max_epochs},
               {"early_stop_patience", n.early_stop_patience}};
  j["probe_powers_dbm"] = cfg.probe_powers_dbm;
  j["rel_change_deltas"] = cfg.rel_change_deltas;
  j["silent_warmup_steps"] = cfg.silent_warmup_steps;
  const ExperimentParams& e = cfg.experiment;
  json policies = json::array();
  for (Policy p2 : e.policies) policies.push_back(policy_name(p2));
  j["experiment"] = {{"loads", e.loads},
                     {"runs", e.runs},
                     {"policies", policies},
                     {"master_seed", e.master_seed},
                     {"noise_grid_dbm", e.noise_grid_dbm},
                     {"exhaustive_cap", e.exhaustive_cap},
                     {"train_scenarios_per_load", e.train_scenarios_per_load},
                     {"min_training_samples", e.min_training_samples},
                     {"train_restarts", e.train_restarts},
                     {"jobs", e.jobs}};
  return j.dump(2) + "\n";
}

namespace {

int primary_count_for_load(const SimConfig& cfg, double load) {
  return static_cast<int>(std::lround(load * cfg.playground.bs_count()));
}

double average_pn_kbps(const AmcTable& table, const Eigen::VectorXd& sinr) {
  if (sinr.size() == 0) return 0.0;
  double acc = 0.0;
  for (int i = 0; i < sinr.size(); ++i)
    acc += effective_throughput_kbps(sinr(i), table);
  return acc / sinr.size();
}

std::vector<int> baseline_types(const AmcTable& table,
                                const Eigen::VectorXd& sinr) {
  std::vector<int> types(sinr.size());
  for (int i = 0; i < sinr.size(); ++i)
    types[i] = modulation_type_index(mode_for_sinr(sinr(i), table));
  return types;
}

// Runs cell worker lambdas over [0, n) with a shared index, joining before
// returning and rethrowing the first failure.
void parallel_cells(int n, int jobs, const std::function<void(int)>& work) {
  int threads = jobs > 0 ? jobs
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n > 0 ? n : 1);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      int i = next.fetch_add(1);
      if (i >= n) break;
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<NoiseSweepRow> run_noise_sweep(const SimConfig& cfg) {
  cfg.validate();
  const AmcTable table = cfg.amc_table();
  std::vector<double> grid = cfg.experiment.noise_grid_dbm;
  if (grid.empty()) grid = default_config().experiment.noise_grid_dbm;
  std::sort(grid.begin(), grid.end());

  const int n_loads = static_cast<int>(cfg.experiment.loads.size());
  const int runs = cfg.experiment.runs;
  const int n_grid = static_cast<int>(grid.size());

  // means[load][noise] accumulated over runs; the scenario for (load, run)
  // is reused across the whole grid so the sweep is a paired comparison.
  std::vector<std::vector<double>> sums(n_loads,
                                        std::vector<double>(n_grid, 0.0));
  const int cells = n_loads * runs;
  std::vector<std::vector<double>> cell_kbps(cells);

  parallel_cells(cells, cfg.experiment.jobs, [&](int cell) {
    const int li = cell / runs;
    const int run = cell % runs;
    const double load = cfg.experiment.loads[li];
    Scenario scn = generate_scenario(
        cfg.playground, primary_count_for_load(cfg, load),
        substream(cfg.experiment.master_seed, "noise-scn", li, run));
    ChannelGains g = gain_matrices(scn);
    std::vector<double>& out = cell_kbps[cell];
    out.resize(n_grid);
    for (int ni = 0; ni < n_grid; ++ni) {
      const double noise_mw = dbm_to_mw(grid[ni]);
      PrimaryControlResult pc =
          run_primary_power_control(g, noise_mw, cfg.playground);
      PowerState state =
          PowerState::primary_only(pc.pn_dbm, cfg.playground.su_pair_count);
      out[ni] = average_pn_kbps(table, primary_sinr(state, g, noise_mw));
    }
  });

  for (int cell = 0; cell < cells; ++cell)
    for (int ni = 0; ni < n_grid; ++ni)
      sums[cell / runs][ni] += cell_kbps[cell][ni];

  std::vector<NoiseSweepRow> rows;
  for (int li = 0; li < n_loads; ++li) {
    const double reference = sums[li][0] / runs;
    for (int ni = 0; ni < n_grid; ++ni) {
      NoiseSweepRow row;
      row.load = cfg.experiment.loads[li];
      row.noise_dbm = grid[ni];
      row.pn_kbps = sums[li][ni] / runs;
      row.rel_change =
          reference > 0.0 ? (reference - row.pn_kbps) / reference : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

// Replays one controller trace into per-secondary training sequences:
// u1 = own transmit power (floor when silent), u2 = sensed modulation type of
// the nearest primary link, y = that link's true throughput. The delay taps
// are primed with exactly the cold-start symbol the forecaster replays at run
// time (floor power, baseline modulation, the sensed band's median
// throughput). The priming spans precisely the model warmup, so no priming
// row is ever scored as a target; the first scored row is a true silent
// observation, teaching the network to map the cold-start state to the real
// baseline throughput before the controller walk begins.
void trace_to_sequences(const SimConfig& cfg, const AmcTable& table,
                        const ChannelGains& g, const Eigen::VectorXd& pn_dbm,
                        const std::vector<int>& nearest,
                        const std::vector<int>& base_types,
                        const std::vector<FmTraceStep>& trace, double load,
                        double noise_mw, std::vector<Sequence>* out) {
  const int n_s = static_cast<int>(nearest.size());
  const double floor_dbm = cfg.probe_powers_dbm.front();
  const int pad = cfg.narx.warmup();

  PowerState state = PowerState::primary_only(pn_dbm, n_s);
  Eigen::VectorXd base_sinr = primary_sinr(state, g, noise_mw);

  std::vector<Sequence> seqs(n_s);
  for (int k = 0; k < n_s; ++k) {
    if (nearest[k] < 0) continue;
    Sequence& s = seqs[k];
    s.load = load;
    s.su_index = k;
    s.u1.assign(pad, floor_dbm);
    s.u2.assign(pad, static_cast<double>(base_types[k]));
    s.y.assign(pad,
               median_mode_for_type(base_types[k], table).throughput_kbps);
    // One true silent step: the whole secondary network is quiet and the
    // nearest link runs at its baseline throughput.
    s.u1.push_back(floor_dbm);
    s.u2.push_back(static_cast<double>(base_types[k]));
    s.y.push_back(effective_throughput_kbps(base_sinr(nearest[k]), table));
  }
  for (const FmTraceStep& step : trace) {
    state.sn_dbm = step.sn_dbm;
    state.sn_active = step.sn_active;
    Eigen::VectorXd sinr = primary_sinr(state, g, noise_mw);
    for (int k = 0; k < n_s; ++k) {
      if (nearest[k] < 0) continue;
      Sequence& s = seqs[k];
      s.u1.push_back(step.sn_active[k] ? step.sn_dbm(k) : floor_dbm);
      s.u2.push_back(static_cast<double>(
          modulation_type_index(mode_for_sinr(sinr(nearest[k]), table))));
      s.y.push_back(effective_throughput_kbps(sinr(nearest[k]), table));
    }
  }

  for (int k = 0; k < n_s; ++k)
    if (nearest[k] >= 0) out->push_back(std::move(seqs[k]));
}

}  // namespace

TrainingSet generate_training_data(const SimConfig& cfg) {
  cfg.validate();
  const AmcTable table = cfg.amc_table();
  const double noise_mw = cfg.playground.noise_mw();
  const TargetLadder ladder = TargetLadder::from_amc_table(table);
  const int n_loads = static_cast<int>(cfg.experiment.loads.size());

  TrainingSet data;
  int scenario_index = 0;
  while (true) {
    bool quota_met = scenario_index >= n_loads * cfg.experiment.train_scenarios_per_load;
    if (quota_met && total_samples(data, cfg.narx) >= cfg.experiment.min_training_samples)
      break;
    // Safety valve: a degenerate configuration must not spin forever.
    if (scenario_index > 10000)
      throw std::runtime_error("training data generation did not reach quota");

    const int li = scenario_index % n_loads;
    const double load = cfg.experiment.loads[li];
    Scenario scn = generate_scenario(
        cfg.playground, primary_count_for_load(cfg, load),
        substream(cfg.experiment.master_seed, "train-scn", li,
                  scenario_index / n_loads));
    ChannelGains g = gain_matrices(scn);
    PrimaryControlResult pc =
        run_primary_power_control(g, noise_mw, cfg.playground);
    PowerState base = PowerState::primary_only(pc.pn_dbm, scn.su_count());
    Eigen::VectorXd base_sinr = primary_sinr(base, g, noise_mw);
    std::vector<int> nearest = nearest_primary_links(g, pc.pn_dbm);
    std::vector<int> types = baseline_types(table, base_sinr);
    std::vector<int> su_types(scn.su_count());
    for (int k = 0; k < scn.su_count(); ++k)
      su_types[k] = nearest[k] >= 0 ? types[nearest[k]] : 0;

    FmResult fm = fm_with_modulation_constraint(
        g, pc.pn_dbm, nearest, su_types, ladder, table, cfg.playground,
        noise_mw, /*record_trace=*/true);
    trace_to_sequences(cfg, table, g, pc.pn_dbm, nearest, su_types, fm.trace,
                       load, noise_mw, &data.sequences);
    ++scenario_index;
  }
  return data;
}

ExhaustiveResult exhaustive_baselines(const ChannelGains& g,
                                      const Eigen::VectorXd& pn_dbm,
                                      const std::vector<int>& nearest,
                                      const std::vector<double>& schedule_dbm,
                                      const AmcTable& table,
                                      const PlaygroundConfig& cfg,
                                      double noise_mw, long cap) {
  const int n_p = static_cast<int>(pn_dbm.size());
  const int n_s = static_cast<int>(g.gps.cols());
  const int n_choices = static_cast<int>(schedule_dbm.size()) + 1;  // + off

  std::vector<bool> guarded(n_p, false);
  for (int link : nearest) {
    if (link >= n_p) throw std::invalid_argument("nearest link out of range");
    if (link >= 0) guarded[link] = true;
  }

  ExhaustiveResult result;
  double settings = 1.0;
  for (int k = 0; k < n_s; ++k) settings *= n_choices;
  if (settings > static_cast<double>(cap)) {
    result.enabled = false;
    return result;
  }

  // Interference injected at primary receiver i by secondary k at choice c
  // (choice 0 = off). Baseline denominator has the primary-on-primary part.
  std::vector<std::vector<double>> contrib(
      n_s, std::vector<double>(n_choices * n_p, 0.0));
  for (int k = 0; k < n_s; ++k)
    for (int c = 1; c < n_choices; ++c) {
      const double p_mw = dbm_to_mw(schedule_dbm[c - 1]);
      for (int i = 0; i < n_p; ++i)
        contrib[k][c * n_p + i] = g.gps(i, k) * p_mw;
    }

  PowerState base = PowerState::primary_only(pn_dbm, n_s);
  Eigen::VectorXd base_sinr = primary_sinr(base, g, noise_mw);
  std::vector<int> base_types = baseline_types(table, base_sinr);
  Eigen::VectorXd signal(n_p), base_denom(n_p);
  for (int i = 0; i < n_p; ++i) {
    const double sig = g.gpp(i, i) * dbm_to_mw(pn_dbm(i));
    signal(i) = sig;
    base_denom(i) = sig / base_sinr(i);
  }

  auto setting_of = [&](const std::vector<int>& choice, double kbps) {
    ExhaustiveSetting s;
    s.sn_dbm = Eigen::VectorXd::Zero(n_s);
    s.sn_active.assign(n_s, false);
    s.pn_kbps = kbps;
    for (int k = 0; k < n_s; ++k)
      if (choice[k] > 0) {
        s.sn_active[k] = true;
        s.sn_dbm(k) = schedule_dbm[choice[k] - 1];
        s.total_sn_mw += dbm_to_mw(s.sn_dbm(k));
      }
    return s;
  };

  bool have_any = false;
  std::vector<int> choice(n_s, 0);
  std::vector<int> best_min_choice, best_max_choice;
  double best_min_kbps = 0.0, best_max_kbps = 0.0;
  double best_min_mw = 0.0, best_max_mw = 0.0;

  while (true) {
    ++result.evaluated;
    double total_mw = 0.0;
    for (int k = 0; k < n_s; ++k)
      if (choice[k] > 0) total_mw += dbm_to_mw(schedule_dbm[choice[k] - 1]);

    bool feasible = true;
    double kbps_acc = 0.0;
    for (int i = 0; i < n_p; ++i) {
      double denom = base_denom(i);
      for (int k = 0; k < n_s; ++k) denom += contrib[k][choice[k] * n_p + i];
      const double sinr = signal(i) / denom;
      if (guarded[i] && modulation_type_index(mode_for_sinr(sinr, table)) !=
                            base_types[i]) {
        feasible = false;
        break;
      }
      kbps_acc += effective_throughput_kbps(sinr, table);
    }

    if (feasible) {
      const double kbps = n_p > 0 ? kbps_acc / n_p : 0.0;
      if (!have_any) {
        have_any = true;
        best_min_choice = best_max_choice = choice;
        best_min_kbps = best_max_kbps = kbps;
        best_min_mw = best_max_mw = total_mw;
      } else {
        if (kbps < best_min_kbps ||
            (kbps == best_min_kbps && total_mw < best_min_mw)) {
          best_min_choice = choice;
          best_min_kbps = kbps;
          best_min_mw = total_mw;
        }
        if (kbps > best_max_kbps ||
            (kbps == best_max_kbps && total_mw < best_max_mw)) {
          best_max_choice = choice;
          best_max_kbps = kbps;
          best_max_mw = total_mw;
        }
      }
    }

    int digit = 0;
    while (digit < n_s && ++choice[digit] == n_choices) choice[digit++] = 0;
    if (digit == n_s) break;
  }

  result.min_setting = setting_of(best_min_choice, best_min_kbps);
  result.max_setting = setting_of(best_max_choice, best_max_kbps);
  return result;
}

namespace {

struct CellOutput {
  std::vector<McRow> rows;
  std::map<Policy, std::vector<double>> sn_samples;
  std::map<Policy, std::array<long, 4>> cqi_counts;
};

double average_sn_kbps(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double v : samples) acc += v;
  return acc / samples.size();
}

// Per-secondary throughput at a joint setting; inactive members sample zero.
std::vector<double> sn_throughputs(const PowerState& state,
                                   const ChannelGains& g, double noise_mw,
                                   const AmcTable& table) {
  std::vector<double> out;
  for (const std::optional<double>& s : secondary_sinr(state, g, noise_mw))
    out.push_back(s ? effective_throughput_kbps(*s, table) : 0.0);
  return out;
}

void fill_cqi_counts(const AmcTable& table, const Eigen::VectorXd& final_sinr,
                     const std::vector<int>& nearest,
                     const std::vector<std::vector<double>>& t_hat,
                     const std::vector<int>& chosen_entry,
                     std::array<long, 4>* counts) {
  for (std::size_t k = 0; k < nearest.size(); ++k) {
    if (nearest[k] < 0 || chosen_entry[k] < 0) continue;
    const int predicted =
        mode_for_throughput(t_hat[k][chosen_entry[k]], table).cqi;
    const int actual = mode_for_sinr(final_sinr(nearest[k]), table).cqi;
    int err = std::abs(predicted - actual);
    (*counts)[std::min(err, 3)] += 1;
  }
}

}  // namespace

McResult run_monte_carlo(const SimConfig& cfg, const NarxModel* model) {
  cfg.validate();
  const AmcTable table = cfg.amc_table();
  const double noise_mw = cfg.playground.noise_mw();
  const TargetLadder ladder = TargetLadder::from_amc_table(table);

  bool needs_model = false;
  for (Policy p : cfg.experiment.policies)
    if (p == Policy::kNnNoModChange || p == Policy::kNnRelChange2 ||
        p == Policy::kNnRelChange5 || p == Policy::kNnRelChange10)
      needs_model = true;
  if (needs_model && model == nullptr)
    throw std::invalid_argument("prediction-driven policy requested without a model");

  const int n_loads = static_cast<int>(cfg.experiment.loads.size());
  const int runs = cfg.experiment.runs;
  const int cells = n_loads * runs;
  std::vector<CellOutput> slots(cells);

  parallel_cells(cells, cfg.experiment.jobs, [&](int cell) {
    const int li = cell / runs;
    const int run = cell % runs;
    const double load = cfg.experiment.loads[li];
    CellOutput& out = slots[cell];

    Scenario scn = generate_scenario(
        cfg.playground, primary_count_for_load(cfg, load),
        substream(cfg.experiment.master_seed, "mc-scn", li, run));
    ChannelGains g = gain_matrices(scn);
    PrimaryControlResult pc =
        run_primary_power_control(g, noise_mw, cfg.playground);
    const int n_s = scn.su_count();

    PowerState base = PowerState::primary_only(pc.pn_dbm, n_s);
    Eigen::VectorXd base_sinr = primary_sinr(base, g, noise_mw);
    const double baseline_kbps = average_pn_kbps(table, base_sinr);
    std::vector<int> nearest = nearest_primary_links(g, pc.pn_dbm);
    std::vector<int> link_types = baseline_types(table, base_sinr);
    std::vector<int> su_types(n_s);
    for (int k = 0; k < n_s; ++k)
      su_types[k] = nearest[k] >= 0 ? link_types[nearest[k]] : 0;

    auto emit = [&](Policy policy, const PowerState& state,
                    int not_transmitting) {
      McRow row;
      row.policy = policy;
      row.load = load;
      row.run = run;
      Eigen::VectorXd sinr = primary_sinr(state, g, noise_mw);
      row.pn_kbps = average_pn_kbps(table, sinr);
      row.rel_change = baseline_kbps > 0.0
                           ? (baseline_kbps - row.pn_kbps) / baseline_kbps
                           : 0.0;
      std::vector<double> sn = sn_throughputs(state, g, noise_mw, table);
      row.sn_kbps = average_sn_kbps(sn);
      row.blocked_frac = n_s > 0 ? static_cast<double>(not_transmitting) / n_s : 0.0;
      out.rows.push_back(row);
      if (policy != Policy::kPnOnly) {
        auto& bucket = out.sn_samples[policy];
        bucket.insert(bucket.end(), sn.begin(), sn.end());
      }
      return sinr;
    };

    // Shared sensing epoch for all prediction-driven variants: first decide
    // who participates from a baseline-only forecast, then sweep.
    std::vector<ProbeEpochRecord> records;
    std::vector<std::vector<double>> t_hat(n_s);
    bool epoch_ready = false;
    auto ensure_epoch = [&] {
      if (epoch_ready) return;
      const double floor_dbm = cfg.probe_powers_dbm.front();
      std::vector<ProbeEpochRecord> base_records = execute_probe_epoch(
          g, pc.pn_dbm, nearest, {}, std::vector<bool>(n_s, false), table,
          noise_mw);
      std::vector<bool> participate(n_s, false);
      for (int k = 0; k < n_s; ++k) {
        if (nearest[k] < 0) continue;
        double t0 = predict_throughput_vector(*model, base_records[k],
                                              floor_dbm,
                                              cfg.silent_warmup_steps, table)[0];
        participate[k] =
            t0 > 0.0 &&
            mode_for_throughput(t0, table).cqi != table.modes.front().cqi;
      }
      records = execute_probe_epoch(g, pc.pn_dbm, nearest,
                                    cfg.probe_powers_dbm, participate, table,
                                    noise_mw);
      for (int k = 0; k < n_s; ++k)
        t_hat[k] = predict_throughput_vector(*model, records[k], floor_dbm,
                                             cfg.silent_warmup_steps, table);
      epoch_ready = true;
    };

    for (Policy policy : cfg.experiment.policies) {
      switch (policy) {
        case Policy::kPnOnly: {
          emit(policy, base, 0);
          break;
        }
        case Policy::kFmBaseline: {
          FmResult fm = fm_with_modulation_constraint(
              g, pc.pn_dbm, nearest, su_types, ladder, table, cfg.playground,
              noise_mw, /*record_trace=*/false);
          PowerState state = base;
          int silent = 0;
          for (int k = 0; k < n_s; ++k) {
            const SuDecision& d = fm.decisions[k];
            state.sn_active[k] = d.kind == SuDecisionKind::kTransmit;
            state.sn_dbm(k) = state.sn_active[k] ? d.power_dbm
                                                 : cfg.playground.sn_power_min_dbm;
            if (!state.sn_active[k]) ++silent;
          }
          emit(policy, state, silent);
          break;
        }
        case Policy::kNnNoModChange:
        case Policy::kNnRelChange2:
        case Policy::kNnRelChange5:
        case Policy::kNnRelChange10: {
          ensure_epoch();
          PolicyConfig pol;
          pol.probe_powers_dbm = cfg.probe_powers_dbm;
          pol.silent_warmup_steps = cfg.silent_warmup_steps;
          if (policy == Policy::kNnNoModChange) {
            pol.kind = PolicyConfig::Kind::kNoModChange;
          } else {
            pol.kind = PolicyConfig::Kind::kMaxRelChange;
            pol.delta = policy == Policy::kNnRelChange2
                            ? cfg.rel_change_deltas[0]
                            : policy == Policy::kNnRelChange5
                                  ? cfg.rel_change_deltas[1]
                                  : cfg.rel_change_deltas[2];
          }
          PowerState state = base;
          int silent = 0;
          std::vector<int> chosen_entry(n_s, -1);
          for (int k = 0; k < n_s; ++k) {
            PowerDecision d =
                select_power(records[k], t_hat[k], pol, table, cfg.playground);
            state.sn_active[k] = d.kind == SuDecisionKind::kTransmit;
            state.sn_dbm(k) = d.power_dbm;
            if (!state.sn_active[k]) {
              ++silent;
            } else if (records[k].probed) {
              for (std::size_t i = 0; i < records[k].steps.size(); ++i)
                if (records[k].steps[i].power_dbm == d.power_dbm)
                  chosen_entry[k] = static_cast<int>(i) + 1;
            }
          }
          Eigen::VectorXd final_sinr = emit(policy, state, silent);
          auto& counts = out.cqi_counts[policy];
          fill_cqi_counts(table, final_sinr, nearest, t_hat, chosen_entry,
                          &counts);
          break;
        }
        case Policy::kExhaustiveMin:
        case Policy::kExhaustiveMax: {
          ExhaustiveResult ex = exhaustive_baselines(
              g, pc.pn_dbm, nearest, cfg.probe_powers_dbm, table,
              cfg.playground, noise_mw, cfg.experiment.exhaustive_cap);
          if (!ex.enabled) break;
          const ExhaustiveSetting& s = policy == Policy::kExhaustiveMin
                                           ? ex.min_setting
                                           : ex.max_setting;
          PowerState state = base;
          int silent = 0;
          for (int k = 0; k < n_s; ++k) {
            state.sn_active[k] = s.sn_active[k];
            state.sn_dbm(k) =
                s.sn_active[k] ? s.sn_dbm(k) : cfg.playground.sn_power_min_dbm;
            if (!s.sn_active[k]) ++silent;
          }
          emit(policy, state, silent);
          break;
        }
      }
    }
  });

  McResult result;
  for (int cell = 0; cell < cells; ++cell) {
    const double load = cfg.experiment.loads[cell / runs];
    CellOutput& out = slots[cell];
    result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
    for (auto& [policy, samples] : out.sn_samples) {
      auto& bucket = result.sn_samples[{policy, load}];
      bucket.insert(bucket.end(), samples.begin(), samples.end());
    }
    for (auto& [policy, counts] : out.cqi_counts) {
      auto& bucket = result.cqi_error_counts[{policy, load}];
      for (int b = 0; b < 4; ++b) bucket[b] += counts[b];
    }
  }
  return result;
}

std::vector<CdfRow> sn_throughput_cdf(const McResult& mc) {
  std::vector<CdfRow> rows;
  for (const auto& [key, samples] : mc.sn_samples) {
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      CdfRow row;
      row.policy = key.first;
      row.load = key.second;
      row.throughput_kbps = sorted[i];
      row.cdf = static_cast<double>(i + 1) / sorted.size();
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<HistRow> cqi_error_histogram(const NarxModel& m,
                                         const TrainingSet& data,
                                         const SimConfig& cfg) {
  const AmcTable table = cfg.amc_table();
  const int w = m.cfg.warmup();
  std::map<double, std::array<long, 4>> counts;

  for (const Sequence& s : data.sequences) {
    SplitRange test = split_range(s, data, SplitPart::kTest, m.cfg);
    if (test.end <= test.begin) continue;
    const int n = static_cast<int>(s.y.size());
    if (n <= w) continue;

    std::vector<double> pred = open_loop_predict(m, s.u1, s.u2, s.y);

    auto& bucket = counts[s.load];
    for (int step = test.begin; step < test.end; ++step) {
      const int predicted = mode_for_throughput(pred[step - w], table).cqi;
      const int actual = mode_for_throughput(s.y[step], table).cqi;
      bucket[std::min(std::abs(predicted - actual), 3)] += 1;
    }
  }

  std::vector<HistRow> rows;
  for (const auto& [load, bucket] : counts) {
    long total = bucket[0] + bucket[1] + bucket[2] + bucket[3];
    for (int b = 0; b < 4; ++b) {
      HistRow row;
      row.load = load;
      row.abs_error = b;
      row.freq = total > 0 ? static_cast<double>(bucket[b]) / total : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_noise_sweep_csv(const std::vector<NoiseSweepRow>& rows,
                           std::ostream& os) {
  os << "load,noise_dbm,pn_kbps,rel_change\n";
  for (const NoiseSweepRow& r : rows)
    os << csv_num(r.load) << ',' << csv_num(r.noise_dbm) << ','
       << csv_num(r.pn_kbps) << ',' << csv_num(r.rel_change) << '\n';
}

void write_monte_carlo_csv(const std::vector<McRow>& rows, std::ostream& os) {
  os << "policy,load,run,pn_kbps,rel_change,sn_kbps,blocked_frac\n";
  for (const McRow& r : rows)
    os << policy_name(r.policy) << ',' << csv_num(r.load) << ',' << r.run
       << ',' << csv_num(r.pn_kbps) << ',' << csv_num(r.rel_change) << ','
       << csv_num(r.sn_kbps) << ',' << csv_num(r.blocked_frac) << '\n';
}

void write_sn_cdf_csv(const std::vector<CdfRow>& rows, std::ostream& os) {
  os << "policy,load,throughput_kbps,cdf\n";
  for (const CdfRow& r : rows)
    os << policy_name(r.policy) << ',' << csv_num(r.load) << ','
       << csv_num(r.throughput_kbps) << ',' << csv_num(r.cdf) << '\n';
}

void write_cqi_hist_csv(const std::vector<HistRow>& rows, std::ostream& os) {
  os << "load,abs_error,freq\n";
  for (const HistRow& r : rows)
    os << csv_num(r.load) << ',' << r.abs_error << ',' << csv_num(r.freq)
       << '\n';
}

}  // namespace dsa
