#include <doctest.h>

#include <cstdlib>
#include <set>

#include "dsa/util.hpp"

using namespace dsa;

TEST_CASE("decibel conversions hit exact anchors") {
  CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3));
  CHECK(dbm_to_mw(30.0) == doctest::Approx(1000.0));
  CHECK(mw_to_dbm(1.0) == doctest::Approx(0.0));
  for (double v : {-47.3, 0.0, 3.5, 40.0})
    CHECK(linear_to_db(db_to_linear(v)) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("splitmix64 matches the reference sequence") {
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xe220a8397b1dcdafull);
  CHECK(splitmix64(s) == 0x6e789e6aa1b965f4ull);
  CHECK(splitmix64(s) == 0x06c45d188009454full);
  s = 42;
  CHECK(splitmix64(s) == 0xbdd732262feb6e95ull);
  CHECK(splitmix64(s) == 0x28efe333b266f103ull);
}

TEST_CASE("substream derivation is deterministic and well-spread") {
  CHECK(substream(1, "pu") == substream(1, "pu"));
  CHECK(substream(1, "pu", 3, 4) == substream(1, "pu", 3, 4));

  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ull, 1ull, 99ull})
    for (const char* tag : {"pu", "su", "xgain", "mc-scn"})
      for (std::uint64_t a = 0; a < 4; ++a)
        for (std::uint64_t b = 0; b < 4; ++b)
          seen.insert(substream(master, tag, a, b));
  CHECK(seen.size() == 3 * 4 * 4 * 4);  // no collisions across the lattice
}

TEST_CASE("csv formatting keeps nine significant digits") {
  CHECK(csv_num(1.0 / 3.0) == "0.333333333");
  CHECK(csv_num(0.0) == "0");
  CHECK(csv_num(-2.5) == "-2.5");
  CHECK(csv_num(1866.375) == "1866.375");
}

TEST_CASE("full precision round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 1.7976931348623157e308, 5e-324,
                   -0.0, 123456.789012345, -9.999999999999999e-5}) {
    std::string text = full_num(v);
    double back = std::strtod(text.c_str(), nullptr);
    CHECK(back == v);
  }
}
