#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace dsa {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

// dBm and mW share the decibel scaling; separate names keep call sites honest.
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

// splitmix64 step; full-period mixer, good enough to decorrelate substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic seed for an independent stream identified by (tag, a, b).
// Every absorption feeds the mixed output back into the state, so nearby
// (tag, a, b) inputs land on unrelated seeds.
inline std::uint64_t substream(std::uint64_t master, std::string_view tag,
                               std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = master;
  for (char c : tag) {
    s ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    s = splitmix64(s);
  }
  s ^= 0x51'7c'c1'b7'27'22'0a'95ull ^ a;
  s = splitmix64(s);
  s ^= b;
  return splitmix64(s);
}

// Fixed-precision float formatting. Metric CSVs use 9 significant digits,
// serialized state uses 17 (round-trips an IEEE double exactly).
inline std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}
inline std::string csv_num(double v) { return format_sig(v, 9); }
inline std::string full_num(double v) { return format_sig(v, 17); }

}  // namespace dsa
