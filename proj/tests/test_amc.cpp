#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dsa/amc.hpp"

using namespace dsa;

namespace {
const AmcTable kTable = default_amc_table();
}

TEST_CASE("ladder anchors match hand-computed efficiency and thresholds") {
  // eff = bits * rate / 1024; threshold = 2^eff - 1 (k = 1);
  // kbps = eff * 336000 / 1000. Values frozen from independent arithmetic.
  const AmcMode& m1 = kTable.modes[0];
  CHECK(m1.cqi == 1);
  CHECK(m1.efficiency == doctest::Approx(0.15234375).epsilon(1e-15));
  CHECK(m1.sinr_threshold == doctest::Approx(0.11137350334481755).epsilon(1e-15));
  CHECK(m1.throughput_kbps == doctest::Approx(51.1875).epsilon(1e-15));
  CHECK(m1.modulation == ModulationType::kFourPoint);

  const AmcMode& m2 = kTable.modes[1];
  CHECK(m2.efficiency == doctest::Approx(0.234375).epsilon(1e-15));
  CHECK(m2.throughput_kbps == doctest::Approx(78.75).epsilon(1e-15));

  const AmcMode& m7 = kTable.modes[6];
  CHECK(m7.cqi == 7);
  CHECK(m7.efficiency == doctest::Approx(1.4765625).epsilon(1e-15));
  CHECK(m7.sinr_threshold == doctest::Approx(1.7828487515438525).epsilon(1e-15));
  CHECK(m7.throughput_kbps == doctest::Approx(496.125).epsilon(1e-15));
  CHECK(m7.modulation == ModulationType::kSixteenPoint);

  const AmcMode& m15 = kTable.modes[14];
  CHECK(m15.cqi == 15);
  CHECK(m15.efficiency == doctest::Approx(5.5546875).epsilon(1e-15));
  CHECK(m15.sinr_threshold == doctest::Approx(46.00321386678342).epsilon(1e-14));
  CHECK(m15.throughput_kbps == doctest::Approx(1866.375).epsilon(1e-15));
  CHECK(m15.modulation == ModulationType::kSixtyFourPoint);
}

TEST_CASE("ladder is strictly increasing in threshold and throughput") {
  for (int i = 1; i < 15; ++i) {
    CHECK(kTable.modes[i].cqi == i + 1);
    CHECK(kTable.modes[i].sinr_threshold > kTable.modes[i - 1].sinr_threshold);
    CHECK(kTable.modes[i].throughput_kbps > kTable.modes[i - 1].throughput_kbps);
  }
}

TEST_CASE("modulation bands cover 1-6, 7-9, 10-15") {
  for (int i = 0; i < 15; ++i) {
    int expected = i < 6 ? 0 : i < 9 ? 1 : 2;
    CHECK(modulation_type_index(kTable.modes[i]) == expected);
  }
}

TEST_CASE("mode selection is boundary-inclusive") {
  for (int i = 0; i < 15; ++i) {
    const AmcMode& m = kTable.modes[i];
    CHECK(mode_for_sinr(m.sinr_threshold, kTable).cqi == m.cqi);
    if (i > 0)
      CHECK(mode_for_sinr(std::nextafter(m.sinr_threshold, 0.0), kTable).cqi ==
            m.cqi - 1);
  }
  // Far above the top threshold the table saturates.
  CHECK(mode_for_sinr(1e9, kTable).cqi == 15);
}

TEST_CASE("outage classifies the lowest mode but throughput is zero") {
  double below = kTable.modes[0].sinr_threshold * 0.5;
  CHECK(mode_for_sinr(below, kTable).cqi == 1);
  CHECK(effective_throughput_kbps(below, kTable) == 0.0);
  CHECK(effective_throughput_kbps(kTable.modes[0].sinr_threshold, kTable) ==
        doctest::Approx(51.1875));
  CHECK(effective_throughput_kbps(0.0, kTable) == 0.0);
}

TEST_CASE("invalid sinr values are rejected") {
  CHECK_THROWS_AS(mode_for_sinr(-1e-9, kTable), std::domain_error);
  CHECK_THROWS_AS(mode_for_sinr(std::nan(""), kTable), std::domain_error);
  CHECK_THROWS_AS(effective_throughput_kbps(-1.0, kTable), std::domain_error);
}

TEST_CASE("attenuation parameter rescales thresholds only") {
  AmcTable half = default_amc_table(0.5);
  for (int i = 0; i < 15; ++i) {
    CHECK(half.modes[i].sinr_threshold ==
          doctest::Approx(2.0 * kTable.modes[i].sinr_threshold).epsilon(1e-15));
    CHECK(half.modes[i].efficiency == kTable.modes[i].efficiency);
    CHECK(half.modes[i].throughput_kbps == kTable.modes[i].throughput_kbps);
  }
  CHECK_THROWS_AS(default_amc_table(0.0), std::invalid_argument);
  CHECK_THROWS_AS(default_amc_table(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(default_amc_table(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("symbol budget scales throughput linearly") {
  AmcTable big = default_amc_table(1.0, 672000.0);
  for (int i = 0; i < 15; ++i)
    CHECK(big.modes[i].throughput_kbps ==
          doctest::Approx(2.0 * kTable.modes[i].throughput_kbps).epsilon(1e-15));
}

TEST_CASE("throughput quantizer picks the nearest mode, ties low") {
  for (int i = 0; i < 15; ++i)
    CHECK(mode_for_throughput(kTable.modes[i].throughput_kbps, kTable).cqi ==
          kTable.modes[i].cqi);
  CHECK(mode_for_throughput(0.0, kTable).cqi == 1);
  CHECK(mode_for_throughput(-50.0, kTable).cqi == 1);
  CHECK(mode_for_throughput(1e9, kTable).cqi == 15);
  // Exact midpoint of 51.1875 and 78.75 is 64.96875: the tie stays low.
  CHECK(mode_for_throughput(64.96875, kTable).cqi == 1);
  CHECK(mode_for_throughput(std::nextafter(64.96875, 100.0), kTable).cqi == 2);
  CHECK(mode_for_throughput(60.0, kTable).cqi == 1);
  CHECK(mode_for_throughput(70.0, kTable).cqi == 2);
}

TEST_CASE("band medians name the canonical mode per modulation type") {
  // Bands 1-6, 7-9, 10-15; even bands resolve to the lower median.
  CHECK(median_mode_for_type(0, kTable).cqi == 3);
  CHECK(median_mode_for_type(1, kTable).cqi == 8);
  CHECK(median_mode_for_type(2, kTable).cqi == 12);
  CHECK(median_mode_for_type(0, kTable).throughput_kbps ==
        doctest::Approx(126.65625).epsilon(1e-15));
  CHECK(median_mode_for_type(1, kTable).throughput_kbps ==
        doctest::Approx(643.125).epsilon(1e-15));
  CHECK(median_mode_for_type(2, kTable).throughput_kbps ==
        doctest::Approx(1311.1875).epsilon(1e-15));
  CHECK_THROWS_AS(median_mode_for_type(3, kTable), std::invalid_argument);
  CHECK_THROWS_AS(median_mode_for_type(-1, kTable), std::invalid_argument);
}

TEST_CASE("table export lists every mode") {
  std::ostringstream os;
  write_amc_table_csv(kTable, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "cqi,type,code_rate,efficiency,threshold_db,throughput_kbps");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 15);
}
