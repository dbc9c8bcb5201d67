#include "dsa/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsa/util.hpp"

namespace dsa {

namespace {

constexpr double kPrimaryInitDbm = 10.0;
constexpr double kPrimaryTolDb = 0.01;
constexpr int kPrimaryMaxIter = 200;
constexpr double kFmTolDb = 0.1;
constexpr int kFmMaxIter = 30;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

Eigen::VectorXd to_mw(const Eigen::VectorXd& dbm) {
  Eigen::VectorXd mw(dbm.size());
  for (int i = 0; i < dbm.size(); ++i) mw(i) = dbm_to_mw(dbm(i));
  return mw;
}

}  // namespace

PowerState PowerState::primary_only(const Eigen::VectorXd& pn_dbm, int n_su) {
  PowerState s;
  s.pn_dbm = pn_dbm;
  s.sn_dbm = Eigen::VectorXd::Zero(n_su);
  s.sn_active.assign(n_su, false);
  return s;
}

Eigen::VectorXd primary_sinr(const PowerState& state, const ChannelGains& g,
                             double noise_mw) {
  const int n_p = static_cast<int>(g.gpp.rows());
  const int n_s = static_cast<int>(g.gps.cols());
  if (state.pn_dbm.size() != n_p ||
      static_cast<int>(state.sn_active.size()) != n_s)
    throw std::invalid_argument("power state does not match gain dimensions");
  if (!(noise_mw > 0.0)) throw std::invalid_argument("noise must be positive");

  Eigen::VectorXd p_mw = to_mw(state.pn_dbm);
  Eigen::VectorXd sinr(n_p);
  for (int i = 0; i < n_p; ++i) {
    double interference = noise_mw;
    for (int j = 0; j < n_p; ++j)
      if (j != i) interference += g.gpp(i, j) * p_mw(j);
    for (int j = 0; j < n_s; ++j)
      if (state.sn_active[j])
        interference += g.gps(i, j) * dbm_to_mw(state.sn_dbm(j));
    sinr(i) = g.gpp(i, i) * p_mw(i) / interference;
  }
  return sinr;
}

std::vector<std::optional<double>> secondary_sinr(const PowerState& state,
                                                  const ChannelGains& g,
                                                  double noise_mw) {
  const int n_p = static_cast<int>(g.gsp.cols());
  const int n_s = static_cast<int>(g.gss.rows());
  if (state.pn_dbm.size() != n_p ||
      static_cast<int>(state.sn_active.size()) != n_s)
    throw std::invalid_argument("power state does not match gain dimensions");
  if (!(noise_mw > 0.0)) throw std::invalid_argument("noise must be positive");

  Eigen::VectorXd p_mw = to_mw(state.pn_dbm);
  std::vector<std::optional<double>> sinr(n_s);
  for (int i = 0; i < n_s; ++i) {
    if (!state.sn_active[i]) continue;  // no transmission, SINR undefined
    double interference = noise_mw;
    for (int j = 0; j < n_p; ++j) interference += g.gsp(i, j) * p_mw(j);
    for (int j = 0; j < n_s; ++j)
      if (j != i && state.sn_active[j])
        interference += g.gss(i, j) * dbm_to_mw(state.sn_dbm(j));
    sinr[i] = g.gss(i, i) * dbm_to_mw(state.sn_dbm(i)) / interference;
  }
  return sinr;
}

Eigen::VectorXd primary_power_update(const Eigen::VectorXd& pn_dbm,
                                     const ChannelGains& g, double noise_mw,
                                     const PlaygroundConfig& cfg) {
  const int n_p = static_cast<int>(g.gpp.rows());
  if (pn_dbm.size() != n_p)
    throw std::invalid_argument("power vector does not match gain dimensions");
  if (!(noise_mw > 0.0)) throw std::invalid_argument("noise must be positive");

  Eigen::VectorXd p_mw = to_mw(pn_dbm);
  // Interference heard at each receiver under the current powers.
  Eigen::VectorXd denom(n_p);
  for (int j = 0; j < n_p; ++j) {
    double interference = noise_mw;
    for (int m = 0; m < n_p; ++m)
      if (m != j) interference += g.gpp(j, m) * p_mw(m);
    denom(j) = interference;
  }

  Eigen::VectorXd next(n_p);
  for (int i = 0; i < n_p; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n_p; ++j)
      if (j != i) sum += g.gpp(j, i) / denom(j);
    double p = (sum > 0.0) ? 1.0 / sum : dbm_to_mw(cfg.pn_power_max_dbm);
    next(i) = clamp(mw_to_dbm(p), cfg.pn_power_min_dbm, cfg.pn_power_max_dbm);
  }
  return next;
}

PrimaryControlResult run_primary_power_control(const ChannelGains& g,
                                               double noise_mw,
                                               const PlaygroundConfig& cfg) {
  const int n_p = static_cast<int>(g.gpp.rows());
  PrimaryControlResult r;
  if (n_p == 0) {
    r.pn_dbm.resize(0);
    r.converged = true;
    return r;
  }
  if (n_p == 1) {
    // No one to interfere with: serve the link at full power.
    r.pn_dbm = Eigen::VectorXd::Constant(1, cfg.pn_power_max_dbm);
    r.converged = true;
    return r;
  }

  Eigen::VectorXd p = Eigen::VectorXd::Constant(n_p, kPrimaryInitDbm);
  for (int it = 1; it <= kPrimaryMaxIter; ++it) {
    Eigen::VectorXd next = primary_power_update(p, g, noise_mw, cfg);
    double max_move = (next - p).cwiseAbs().maxCoeff();
    p = next;
    r.iterations = it;
    if (max_move < kPrimaryTolDb) {
      r.converged = true;
      break;
    }
  }
  r.pn_dbm = p;
  return r;
}

double fm_update(double power_dbm, double target_sinr_linear,
                 double measured_sinr_linear, const PlaygroundConfig& cfg) {
  if (!(measured_sinr_linear > 0.0))
    throw std::domain_error("measured SINR must be positive");
  if (!(target_sinr_linear > 0.0))
    throw std::domain_error("target SINR must be positive");
  double next_mw =
      dbm_to_mw(power_dbm) * (target_sinr_linear / measured_sinr_linear);
  return clamp(mw_to_dbm(next_mw), cfg.sn_power_min_dbm, cfg.sn_power_max_dbm);
}

TargetLadder TargetLadder::from_amc_table(const AmcTable& table) {
  TargetLadder l;
  l.targets.reserve(table.modes.size());
  for (const AmcMode& m : table.modes) l.targets.push_back(m.sinr_threshold);
  return l;
}

namespace {

// Current modulation type of each secondary's nearest link.
std::vector<int> observed_types(const PowerState& state, const ChannelGains& g,
                                const std::vector<int>& nearest_link,
                                const AmcTable& table, double noise_mw) {
  Eigen::VectorXd sinr = primary_sinr(state, g, noise_mw);
  std::vector<int> types(nearest_link.size(), 0);
  for (std::size_t k = 0; k < nearest_link.size(); ++k) {
    int link = nearest_link[k];
    if (link < 0) continue;
    types[k] = modulation_type_index(mode_for_sinr(sinr(link), table));
  }
  return types;
}

}  // namespace

FmResult fm_with_modulation_constraint(
    const ChannelGains& g, const Eigen::VectorXd& pn_dbm,
    const std::vector<int>& nearest_link, const std::vector<int>& baseline_types,
    const TargetLadder& ladder, const AmcTable& table,
    const PlaygroundConfig& cfg, double noise_mw, bool record_trace) {
  const int n_s = static_cast<int>(g.gss.rows());
  if (static_cast<int>(nearest_link.size()) != n_s ||
      static_cast<int>(baseline_types.size()) != n_s)
    throw std::invalid_argument("per-secondary inputs do not match gains");
  if (ladder.targets.empty())
    throw std::invalid_argument("target ladder is empty");

  FmResult result;
  result.decisions.assign(n_s, SuDecision{});

  PowerState state;
  state.pn_dbm = pn_dbm;
  state.sn_dbm = Eigen::VectorXd::Constant(n_s, cfg.sn_power_min_dbm);
  state.sn_active.assign(n_s, false);

  const int top = static_cast<int>(ladder.targets.size()) - 1;
  std::vector<int> rung(n_s, top);

  for (int k = 0; k < n_s; ++k) {
    if (baseline_types[k] == static_cast<int>(ModulationType::kFourPoint) ||
        nearest_link[k] < 0) {
      // Lowest alphabet at baseline (or nothing to protect against a probe
      // budget for): the guard falls back to silence.
      result.decisions[k] =
          baseline_types[k] == 0 && nearest_link[k] >= 0
              ? SuDecision{SuDecisionKind::kBlocked, 0.0, -1}
              : SuDecision{SuDecisionKind::kTransmit, cfg.sn_power_max_dbm, -1};
      if (nearest_link[k] < 0) {
        state.sn_active[k] = true;
        state.sn_dbm(k) = cfg.sn_power_max_dbm;
      }
      rung[k] = -1;  // takes no part in the ladder procedure
    } else {
      state.sn_active[k] = true;
      // Mid-range start keeps the first inner loop well inside the clamps.
      state.sn_dbm(k) = 0.5 * (cfg.sn_power_min_dbm + cfg.sn_power_max_dbm);
    }
  }

  auto ladder_member = [&](int k) {
    return rung[k] >= 0 && state.sn_active[k];
  };

  for (;;) {
    // Inner loop: synchronous fixed-target iteration for every ladder member.
    for (int it = 0; it < kFmMaxIter; ++it) {
      auto sinr = secondary_sinr(state, g, noise_mw);
      Eigen::VectorXd next = state.sn_dbm;
      double max_move = 0.0;
      for (int k = 0; k < n_s; ++k) {
        if (!ladder_member(k)) continue;
        next(k) = fm_update(state.sn_dbm(k), ladder.targets[rung[k]],
                            sinr[k].value(), cfg);
        max_move = std::max(max_move, std::fabs(next(k) - state.sn_dbm(k)));
      }
      state.sn_dbm = next;
      if (record_trace) result.trace.push_back({state.sn_dbm, state.sn_active});
      if (max_move < kFmTolDb) break;
    }

    // Constraint check: step down every member whose nearest link moved off
    // its baseline modulation type; members at the bottom rung turn off.
    std::vector<int> types =
        observed_types(state, g, nearest_link, table, noise_mw);
    bool changed = false;
    for (int k = 0; k < n_s; ++k) {
      if (!ladder_member(k)) continue;
      if (types[k] == baseline_types[k]) continue;
      changed = true;
      if (rung[k] == 0) {
        rung[k] = -1;
        state.sn_active[k] = false;
        result.decisions[k] = {SuDecisionKind::kOff, 0.0, -1};
      } else {
        --rung[k];
      }
    }
    if (!changed) break;
  }

  for (int k = 0; k < n_s; ++k) {
    if (rung[k] >= 0 && state.sn_active[k])
      result.decisions[k] = {SuDecisionKind::kTransmit, state.sn_dbm(k),
                             rung[k]};
  }
  return result;
}

}  // namespace dsa
