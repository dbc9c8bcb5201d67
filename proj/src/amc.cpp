#include "dsa/amc.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dsa/util.hpp"

namespace dsa {

namespace {

struct ModeSpec {
  ModulationType mod;
  int bits;
  int rate_x1024;
};

// Standard 4-bit CQI ladder: efficiency = bits * rate/1024.
constexpr ModeSpec kModeSpecs[15] = {
    {ModulationType::kFourPoint, 2, 78},
    {ModulationType::kFourPoint, 2, 120},
    {ModulationType::kFourPoint, 2, 193},
    {ModulationType::kFourPoint, 2, 308},
    {ModulationType::kFourPoint, 2, 449},
    {ModulationType::kFourPoint, 2, 602},
    {ModulationType::kSixteenPoint, 4, 378},
    {ModulationType::kSixteenPoint, 4, 490},
    {ModulationType::kSixteenPoint, 4, 616},
    {ModulationType::kSixtyFourPoint, 6, 466},
    {ModulationType::kSixtyFourPoint, 6, 567},
    {ModulationType::kSixtyFourPoint, 6, 666},
    {ModulationType::kSixtyFourPoint, 6, 772},
    {ModulationType::kSixtyFourPoint, 6, 873},
    {ModulationType::kSixtyFourPoint, 6, 948},
};

}  // namespace

AmcTable default_amc_table(double shannon_k, double symbol_budget) {
  if (!(shannon_k > 0.0)) throw std::invalid_argument("shannon_k must be > 0");
  if (!(symbol_budget > 0.0))
    throw std::invalid_argument("symbol_budget must be > 0");
  AmcTable t;
  t.shannon_k = shannon_k;
  t.symbol_budget = symbol_budget;
  for (int m = 0; m < 15; ++m) {
    const ModeSpec& spec = kModeSpecs[m];
    AmcMode& mode = t.modes[m];
    mode.cqi = m + 1;
    mode.modulation = spec.mod;
    mode.code_rate = spec.rate_x1024 / 1024.0;
    mode.efficiency = spec.bits * mode.code_rate;
    mode.sinr_threshold = (std::exp2(mode.efficiency) - 1.0) / shannon_k;
    mode.throughput_kbps = mode.efficiency * symbol_budget / 1000.0;
  }
  return t;
}

const AmcMode& mode_for_sinr(double sinr_linear, const AmcTable& table) {
  if (!(sinr_linear >= 0.0))
    throw std::domain_error("sinr must be non-negative");
  int best = 0;  // outage still classifies as the lowest mode
  for (int m = 14; m >= 1; --m) {
    if (sinr_linear >= table.modes[m].sinr_threshold) {
      best = m;
      break;
    }
  }
  return table.modes[best];
}

double effective_throughput_kbps(double sinr_linear, const AmcTable& table) {
  if (!(sinr_linear >= 0.0))
    throw std::domain_error("sinr must be non-negative");
  if (sinr_linear < table.modes[0].sinr_threshold) return 0.0;
  return mode_for_sinr(sinr_linear, table).throughput_kbps;
}

ModulationType modulation_type_of(const AmcMode& mode) { return mode.modulation; }

int modulation_type_index(const AmcMode& mode) {
  return static_cast<int>(mode.modulation);
}

const AmcMode& mode_for_throughput(double kbps, const AmcTable& table) {
  int best = 0;
  double best_dist = std::fabs(kbps - table.modes[0].throughput_kbps);
  for (int m = 1; m < 15; ++m) {
    double d = std::fabs(kbps - table.modes[m].throughput_kbps);
    if (d < best_dist) {  // strict: ties stay at the lower CQI
      best_dist = d;
      best = m;
    }
  }
  return table.modes[best];
}

const AmcMode& median_mode_for_type(int type, const AmcTable& table) {
  int first = -1, count = 0;
  for (int m = 0; m < 15; ++m) {
    if (modulation_type_index(table.modes[m]) != type) continue;
    if (first < 0) first = m;
    ++count;
  }
  if (first < 0) throw std::invalid_argument("no modes with that type");
  return table.modes[first + (count - 1) / 2];
}

void write_amc_table_csv(const AmcTable& table, std::ostream& os) {
  os << "cqi,type,code_rate,efficiency,threshold_db,throughput_kbps\n";
  for (const AmcMode& m : table.modes) {
    os << m.cqi << ',' << modulation_type_index(m) << ','
       << csv_num(m.code_rate) << ',' << csv_num(m.efficiency) << ','
       << csv_num(linear_to_db(m.sinr_threshold)) << ','
       << csv_num(m.throughput_kbps) << '\n';
  }
}

}  // namespace dsa
