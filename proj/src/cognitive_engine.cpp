#include "dsa/cognitive_engine.hpp"

#include <ostream>
#include <stdexcept>

#include "dsa/util.hpp"

namespace dsa {

int nearest_primary_link(int su, const ChannelGains& g,
                         const Eigen::VectorXd& pn_dbm) {
  const int n_p = static_cast<int>(pn_dbm.size());
  if (su < 0 || su >= g.gsp.rows())
    throw std::invalid_argument("secondary index out of range");
  if (g.gsp.cols() != n_p)
    throw std::invalid_argument("gain/power dimension mismatch");
  int best = -1;
  double best_rx = -1.0;
  for (int j = 0; j < n_p; ++j) {
    double rx = g.gsp(su, j) * dbm_to_mw(pn_dbm(j));
    if (rx > best_rx) {
      best_rx = rx;
      best = j;
    }
  }
  return best;
}

std::vector<int> nearest_primary_links(const ChannelGains& g,
                                       const Eigen::VectorXd& pn_dbm) {
  std::vector<int> out(g.gsp.rows());
  for (int k = 0; k < g.gsp.rows(); ++k)
    out[k] = nearest_primary_link(k, g, pn_dbm);
  return out;
}

int sense_modulation_oracle(int link, const Eigen::VectorXd& pn_sinr_linear,
                            const AmcTable& table) {
  if (link < 0 || link >= pn_sinr_linear.size())
    throw std::invalid_argument("no such primary link");
  return modulation_type_index(mode_for_sinr(pn_sinr_linear(link), table));
}

std::vector<ProbeEpochRecord> execute_probe_epoch(
    const ChannelGains& g, const Eigen::VectorXd& pn_dbm,
    const std::vector<int>& nearest_link,
    const std::vector<double>& schedule_dbm,
    const std::vector<bool>& participate, const AmcTable& table,
    double noise_mw) {
  const int n_s = static_cast<int>(g.gsp.rows());
  if (static_cast<int>(nearest_link.size()) != n_s ||
      static_cast<int>(participate.size()) != n_s)
    throw std::invalid_argument("per-secondary vector size mismatch");
  for (std::size_t i = 1; i < schedule_dbm.size(); ++i)
    if (!(schedule_dbm[i] > schedule_dbm[i - 1]))
      throw std::invalid_argument("probe schedule must ascend");

  std::vector<ProbeEpochRecord> records(n_s);
  PowerState state = PowerState::primary_only(pn_dbm, n_s);

  auto sense_all = [&](double power_dbm, bool baseline) {
    Eigen::VectorXd sinr = primary_sinr(state, g, noise_mw);
    for (int k = 0; k < n_s; ++k) {
      if (records[k].nearest_link < 0) continue;
      int type = sense_modulation_oracle(records[k].nearest_link, sinr, table);
      if (baseline)
        records[k].baseline_type = type;
      else if (records[k].probed)
        records[k].steps.push_back({power_dbm, type});
    }
  };

  for (int k = 0; k < n_s; ++k) {
    records[k].su_index = k;
    records[k].nearest_link = nearest_link[k];
    records[k].probed = participate[k] && !schedule_dbm.empty() &&
                        nearest_link[k] >= 0;
  }

  sense_all(0.0, /*baseline=*/true);

  for (double level : schedule_dbm) {
    for (int k = 0; k < n_s; ++k) {
      state.sn_active[k] = records[k].probed;
      state.sn_dbm(k) = level;
    }
    sense_all(level, /*baseline=*/false);
  }
  return records;
}

std::vector<double> predict_throughput_vector(const NarxModel& m,
                                              const ProbeEpochRecord& record,
                                              double floor_power_dbm,
                                              int silent_warmup_steps,
                                              const AmcTable& table) {
  if (silent_warmup_steps < m.cfg.warmup())
    throw std::invalid_argument(
        "silent warmup shorter than the model's delay lines");

  // The delay lines are primed with a synthetic all-silent span: power at the
  // schedule floor and the baseline modulation. The throughput taps can only
  // be estimated — the radio senses the modulation band, nothing finer — so
  // they are seeded with the band's median throughput. Training sequences
  // carry a matching silent prefix labeled with the true baseline throughput,
  // which teaches the model that a silent span holds the link level steady.
  const double y_seed =
      median_mode_for_type(record.baseline_type, table).throughput_kbps;
  std::vector<double> u1_hist(silent_warmup_steps, floor_power_dbm);
  std::vector<double> u2_hist(silent_warmup_steps,
                              static_cast<double>(record.baseline_type));
  std::vector<double> y_hist(silent_warmup_steps, y_seed);

  std::vector<double> u1_future{floor_power_dbm};
  std::vector<double> u2_future{static_cast<double>(record.baseline_type)};
  for (const ProbeStep& s : record.steps) {
    u1_future.push_back(s.power_dbm);
    u2_future.push_back(static_cast<double>(s.sensed_type));
  }
  return closed_loop_predict(m, u1_hist, u2_hist, y_hist, u1_future, u2_future);
}

std::vector<double> PolicyConfig::default_probe_powers() {
  std::vector<double> powers;
  for (double p = -30.0; p <= 20.0 + 1e-9; p += 5.0) powers.push_back(p);
  return powers;
}

PowerDecision select_power(const ProbeEpochRecord& record,
                           const std::vector<double>& t_hat,
                           const PolicyConfig& policy, const AmcTable& table,
                           const PlaygroundConfig& cfg) {
  if (record.nearest_link < 0)
    return {SuDecisionKind::kTransmit, cfg.sn_power_max_dbm};
  if (t_hat.size() != record.steps.size() + 1)
    throw std::invalid_argument("forecast not aligned with the probe record");

  const double t0 = t_hat[0];
  if (t0 <= 0.0) return {SuDecisionKind::kBlocked, cfg.sn_power_min_dbm};
  const AmcMode& baseline_mode = mode_for_throughput(t0, table);
  if (baseline_mode.cqi == table.modes.front().cqi)
    return {SuDecisionKind::kBlocked, cfg.sn_power_min_dbm};

  const int baseline_type = modulation_type_index(baseline_mode);
  for (int i = static_cast<int>(record.steps.size()) - 1; i >= 0; --i) {
    const double t = t_hat[i + 1];
    bool ok = false;
    if (policy.kind == PolicyConfig::Kind::kNoModChange) {
      ok = modulation_type_index(mode_for_throughput(t, table)) ==
           baseline_type;
    } else {
      ok = (t0 - t) / t0 <= policy.delta;
    }
    if (ok) return {SuDecisionKind::kTransmit, record.steps[i].power_dbm};
  }
  return {SuDecisionKind::kOff, cfg.sn_power_min_dbm};
}

void write_probe_epoch_csv(std::ostream& os,
                           const std::vector<ProbeEpochRecord>& records,
                           const std::vector<std::vector<double>>& t_hat,
                           double floor_power_dbm) {
  os << "su,step,power_dbm,sensed_type,predicted_kbps\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const ProbeEpochRecord& r = records[k];
    const std::vector<double>* pred =
        k < t_hat.size() && !t_hat[k].empty() ? &t_hat[k] : nullptr;
    os << r.su_index << ",0," << csv_num(floor_power_dbm) << ','
       << r.baseline_type << ',';
    if (pred) os << csv_num((*pred)[0]);
    os << '\n';
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      os << r.su_index << ',' << (i + 1) << ','
         << csv_num(r.steps[i].power_dbm) << ',' << r.steps[i].sensed_type
         << ',';
      if (pred && i + 1 < pred->size()) os << csv_num((*pred)[i + 1]);
      os << '\n';
    }
  }
}

}  // namespace dsa
