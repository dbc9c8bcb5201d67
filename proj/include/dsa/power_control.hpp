#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dsa/amc.hpp"
#include "dsa/playground.hpp"

namespace dsa {

// Transmit powers for both networks. Secondary entries are meaningful only
// where sn_active is set; an inactive secondary contributes no interference
// and has no receiver SINR.
struct PowerState {
  Eigen::VectorXd pn_dbm;
  Eigen::VectorXd sn_dbm;
  std::vector<bool> sn_active;
  int iteration = 0;

  static PowerState primary_only(const Eigen::VectorXd& pn_dbm, int n_su);
};

// Per-link primary receiver SINR (linear) including secondary interference.
Eigen::VectorXd primary_sinr(const PowerState& state, const ChannelGains& g,
                             double noise_mw);

// Per-pair secondary receiver SINR; absent where the secondary is inactive.
std::vector<std::optional<double>> secondary_sinr(const PowerState& state,
                                                  const ChannelGains& g,
                                                  double noise_mw);

// One synchronous step of the product-of-SINR power update
//   P_i <- ( sum_{j != i} G_ji / (I_j + noise) )^-1,
// clamped to the primary power range. Secondary interference is never part
// of this update.
Eigen::VectorXd primary_power_update(const Eigen::VectorXd& pn_dbm,
                                     const ChannelGains& g, double noise_mw,
                                     const PlaygroundConfig& cfg);

struct PrimaryControlResult {
  Eigen::VectorXd pn_dbm;
  int iterations = 0;
  bool converged = false;
};

// Iterates primary_power_update from a common 10 dBm start until the largest
// per-link move falls below 0.01 dB or 200 iterations pass. A single link
// gets the range maximum outright.
PrimaryControlResult run_primary_power_control(const ChannelGains& g,
                                               double noise_mw,
                                               const PlaygroundConfig& cfg);

// Fixed-target update P <- (target / measured) * P, clamped to the secondary
// power range. measured must be positive.
double fm_update(double power_dbm, double target_sinr_linear,
                 double measured_sinr_linear, const PlaygroundConfig& cfg);

// Ascending per-mode SINR targets a secondary can aim its own link at.
struct TargetLadder {
  std::vector<double> targets;  // linear, ascending
  static TargetLadder from_amc_table(const AmcTable& table);
};

enum class SuDecisionKind { kTransmit, kBlocked, kOff };

struct SuDecision {
  SuDecisionKind kind = SuDecisionKind::kOff;
  double power_dbm = 0.0;  // meaningful only for kTransmit
  int ladder_rung = -1;    // index into the ladder, -1 when not transmitting
};

struct FmTraceStep {
  Eigen::VectorXd sn_dbm;
  std::vector<bool> sn_active;
};

struct FmResult {
  std::vector<SuDecision> decisions;
  // One entry per inner iteration actually executed, in time order, for
  // callers that want to replay the power trajectory.
  std::vector<FmTraceStep> trace;
};

// Fixed-target secondary control under a modulation guard. Secondaries whose
// nearest link already shows the four-point alphabet at baseline never
// transmit. The rest start at the top ladder rung, run the fixed-target inner
// loop to convergence (30 iterations or 0.1 dB), then step down one rung
// whenever their nearest link's modulation type moved off its baseline;
// a secondary that exhausts the ladder turns off. Rounds are synchronous and
// rungs never move up, so the procedure terminates.
FmResult fm_with_modulation_constraint(
    const ChannelGains& g, const Eigen::VectorXd& pn_dbm,
    const std::vector<int>& nearest_link, const std::vector<int>& baseline_types,
    const TargetLadder& ladder, const AmcTable& table,
    const PlaygroundConfig& cfg, double noise_mw, bool record_trace = false);

}  // namespace dsa
