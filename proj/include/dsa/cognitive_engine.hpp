#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dsa/amc.hpp"
#include "dsa/narx.hpp"
#include "dsa/playground.hpp"
#include "dsa/power_control.hpp"

namespace dsa {

// Index of the primary link heard loudest at this secondary's receiver
// (argmax of gain times transmit power, ties to the lowest index), or -1
// when no primary link is active.
int nearest_primary_link(int su, const ChannelGains& g,
                         const Eigen::VectorXd& pn_dbm);

std::vector<int> nearest_primary_links(const ChannelGains& g,
                                       const Eigen::VectorXd& pn_dbm);

// Ideal modulation classifier: the type of the mode the link currently
// operates in. Links in outage still classify as the lowest mode's type.
int sense_modulation_oracle(int link, const Eigen::VectorXd& pn_sinr_linear,
                            const AmcTable& table);

struct ProbeStep {
  double power_dbm = 0.0;
  int sensed_type = 0;
};

struct ProbeEpochRecord {
  int su_index = -1;
  int nearest_link = -1;
  int baseline_type = 0;        // sensed with the whole secondary network off
  bool probed = false;          // false -> steps stays empty
  std::vector<ProbeStep> steps;
};

// Runs one sensing epoch: step 0 observes every secondary's nearest-link
// modulation with all secondaries silent, then the participating secondaries
// sweep the shared ascending schedule in lockstep, sensing after each level.
// Non-participants keep baseline-only records.
std::vector<ProbeEpochRecord> execute_probe_epoch(
    const ChannelGains& g, const Eigen::VectorXd& pn_dbm,
    const std::vector<int>& nearest_link,
    const std::vector<double>& schedule_dbm,
    const std::vector<bool>& participate, const AmcTable& table,
    double noise_mw);

// Closed-loop throughput forecast for one record: a silent warmup (power at
// the schedule floor, baseline modulation, and the median throughput of the
// sensed modulation band) primes the delay lines, then the baseline step and
// each probe step are predicted in sequence. Returns [T0, T(p1), ..., T(pK)]
// in kbps. Throws if warmup + record cannot fill the model's taps.
std::vector<double> predict_throughput_vector(const NarxModel& m,
                                              const ProbeEpochRecord& record,
                                              double floor_power_dbm,
                                              int silent_warmup_steps,
                                              const AmcTable& table);

struct PolicyConfig {
  enum class Kind { kNoModChange, kMaxRelChange };
  Kind kind = Kind::kNoModChange;
  double delta = 0.0;  // allowed relative drop, kMaxRelChange only
  std::vector<double> probe_powers_dbm;
  int silent_warmup_steps = 16;

  static std::vector<double> default_probe_powers();  // -30..20 dBm, 5 dB steps
};

struct PowerDecision {
  SuDecisionKind kind = SuDecisionKind::kOff;
  double power_dbm = 0.0;
};

// Baseline forecast at the lowest mode's CQI (or a non-positive forecast)
// blocks the secondary. Otherwise pick the largest probe power that keeps the
// forecast acceptable: same predicted modulation type as baseline
// (kNoModChange) or relative drop within delta (kMaxRelChange). No qualifying
// level turns the secondary off. A secondary with no active primary link
// transmits at the range maximum.
PowerDecision select_power(const ProbeEpochRecord& record,
                           const std::vector<double>& t_hat,
                           const PolicyConfig& policy, const AmcTable& table,
                           const PlaygroundConfig& cfg);

// Inspection export: one row per (secondary, epoch step) with the power it
// transmitted, the modulation it sensed, and the forecast for that step.
// t_hat[k] may be empty when no forecast was made for secondary k.
void write_probe_epoch_csv(std::ostream& os,
                           const std::vector<ProbeEpochRecord>& records,
                           const std::vector<std::vector<double>>& t_hat,
                           double floor_power_dbm);

}  // namespace dsa
