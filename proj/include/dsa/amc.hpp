#pragma once

#include <array>
#include <iosfwd>

namespace dsa {

// Modulation alphabet sizes used by the 15-entry CQI ladder.
enum class ModulationType { kFourPoint = 0, kSixteenPoint = 1, kSixtyFourPoint = 2 };

struct AmcMode {
  int cqi = 0;
  ModulationType modulation = ModulationType::kFourPoint;
  double code_rate = 0.0;
  double efficiency = 0.0;       // information bits per symbol
  double sinr_threshold = 0.0;   // linear; lowest SINR that supports the mode
  double throughput_kbps = 0.0;  // efficiency * symbol budget
};

// Switching thresholds come from inverting the attenuated-capacity rate law
// T = log2(1 + k * sinr): threshold_m = (2^eff_m - 1) / k. With k = 1 the
// ladder is ideal-capacity; smaller k models the SNR gap of a real modem.
struct AmcTable {
  std::array<AmcMode, 15> modes;
  double shannon_k = 1.0;
  double symbol_budget = 336000.0;  // symbols per second on the allocation
};

AmcTable default_amc_table(double shannon_k = 1.0,
                           double symbol_budget = 336000.0);

// Highest mode whose threshold is <= sinr (boundaries inclusive). Below the
// first threshold the link is in outage but an observer still classifies the
// lowest mode. Negative or non-finite sinr throws std::domain_error.
const AmcMode& mode_for_sinr(double sinr_linear, const AmcTable& table);

// Zero below the first threshold, else the selected mode's throughput.
double effective_throughput_kbps(double sinr_linear, const AmcTable& table);

ModulationType modulation_type_of(const AmcMode& mode);
int modulation_type_index(const AmcMode& mode);

// Nearest-throughput quantizer: the mode whose throughput is closest in
// absolute kbps; ties resolve to the lower CQI.
const AmcMode& mode_for_throughput(double kbps, const AmcTable& table);

// Median mode of a modulation-type band: the canonical throughput a sensor
// that only observes the type can attribute to a link. Even-sized bands
// resolve to the lower median. Unknown type throws std::invalid_argument.
const AmcMode& median_mode_for_type(int type, const AmcTable& table);

// cqi,type,code_rate,efficiency,threshold_db,throughput_kbps
void write_amc_table_csv(const AmcTable& table, std::ostream& os);

}  // namespace dsa
