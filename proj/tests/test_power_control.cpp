#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "dsa/cognitive_engine.hpp"
#include "dsa/power_control.hpp"
#include "dsa/util.hpp"

using namespace dsa;

namespace {

const PlaygroundConfig kCfg;
const AmcTable kTable = default_amc_table();

ChannelGains random_gains(int n_p, int n_s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(-13.0, -8.0);  // gain exponents
  ChannelGains g;
  g.gpp.resize(n_p, n_p);
  g.gps.resize(n_p, n_s);
  g.gsp.resize(n_s, n_p);
  g.gss.resize(n_s, n_s);
  for (int i = 0; i < n_p; ++i)
    for (int j = 0; j < n_p; ++j)
      g.gpp(i, j) = std::pow(10.0, mag(rng)) * (i == j ? 100.0 : 1.0);
  for (int i = 0; i < n_p; ++i)
    for (int j = 0; j < n_s; ++j) g.gps(i, j) = std::pow(10.0, mag(rng));
  for (int i = 0; i < n_s; ++i)
    for (int j = 0; j < n_p; ++j) g.gsp(i, j) = std::pow(10.0, mag(rng));
  for (int i = 0; i < n_s; ++i)
    for (int j = 0; j < n_s; ++j)
      g.gss(i, j) = std::pow(10.0, mag(rng)) * (i == j ? 100.0 : 1.0);
  return g;
}

// Independent scalar re-derivation of the primary receiver SINR.
double primary_sinr_oracle(int i, const PowerState& st, const ChannelGains& g,
                           double noise_mw) {
  double interference = noise_mw;
  for (int j = 0; j < st.pn_dbm.size(); ++j)
    if (j != i) interference += g.gpp(i, j) * dbm_to_mw(st.pn_dbm(j));
  for (int k = 0; k < st.sn_dbm.size(); ++k)
    if (st.sn_active[k]) interference += g.gps(i, k) * dbm_to_mw(st.sn_dbm(k));
  return g.gpp(i, i) * dbm_to_mw(st.pn_dbm(i)) / interference;
}

double secondary_sinr_oracle(int k, const PowerState& st, const ChannelGains& g,
                             double noise_mw) {
  double interference = noise_mw;
  for (int j = 0; j < st.pn_dbm.size(); ++j)
    interference += g.gsp(k, j) * dbm_to_mw(st.pn_dbm(j));
  for (int m = 0; m < st.sn_dbm.size(); ++m)
    if (m != k && st.sn_active[m])
      interference += g.gss(k, m) * dbm_to_mw(st.sn_dbm(m));
  return g.gss(k, k) * dbm_to_mw(st.sn_dbm(k)) / interference;
}

}  // namespace

TEST_CASE("receiver SINRs match independent scalar oracles") {
  ChannelGains g = random_gains(3, 2, 11);
  PowerState st;
  st.pn_dbm = Eigen::Vector3d(7.0, -3.0, 22.0);
  st.sn_dbm = Eigen::Vector2d(5.0, -10.0);
  st.sn_active = {true, false};
  const double noise = dbm_to_mw(-130.0);

  Eigen::VectorXd sp = primary_sinr(st, g, noise);
  for (int i = 0; i < 3; ++i)
    CHECK(sp(i) ==
          doctest::Approx(primary_sinr_oracle(i, st, g, noise)).epsilon(1e-12));

  auto ss = secondary_sinr(st, g, noise);
  REQUIRE(ss.size() == 2);
  REQUIRE(ss[0].has_value());
  CHECK(!ss[1].has_value());
  CHECK(*ss[0] ==
        doctest::Approx(secondary_sinr_oracle(0, st, g, noise)).epsilon(1e-12));

  // An inactive secondary must not contribute interference either.
  PowerState both = st;
  both.sn_active = {true, true};
  Eigen::VectorXd sp_both = primary_sinr(both, g, noise);
  for (int i = 0; i < 3; ++i) CHECK(sp_both(i) < sp(i));
}

TEST_CASE("two-link pre-clamp update has the closed form P + noise/G") {
  ChannelGains g = random_gains(2, 0, 3);
  const double noise = dbm_to_mw(-130.0);
  Eigen::VectorXd p(2);
  p << 10.0, 4.0;
  Eigen::VectorXd next = primary_power_update(p, g, noise, kCfg);
  // P_i' = (G_ji / (G_ji P_i + noise))^-1 = P_i + noise / G_ji for two links.
  double expect0 = dbm_to_mw(10.0) + noise / g.gpp(1, 0);
  double expect1 = dbm_to_mw(4.0) + noise / g.gpp(0, 1);
  CHECK(next(0) == doctest::Approx(mw_to_dbm(expect0)).epsilon(1e-12));
  CHECK(next(1) == doctest::Approx(mw_to_dbm(expect1)).epsilon(1e-12));
}

TEST_CASE("update matches a direct three-link transcription") {
  ChannelGains g = random_gains(3, 0, 21);
  const double noise = dbm_to_mw(-120.0);
  Eigen::VectorXd p(3);
  p << 0.0, 15.0, -5.0;
  Eigen::VectorXd next = primary_power_update(p, g, noise, kCfg);
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      double denom = noise;
      for (int m = 0; m < 3; ++m)
        if (m != j) denom += g.gpp(j, m) * dbm_to_mw(p(m));
      acc += g.gpp(j, i) / denom;
    }
    double unclamped = mw_to_dbm(1.0 / acc);
    double clamped =
        std::min(kCfg.pn_power_max_dbm, std::max(kCfg.pn_power_min_dbm, unclamped));
    CHECK(next(i) == doctest::Approx(clamped).epsilon(1e-12));
  }
}

TEST_CASE("update clamps to the primary power range") {
  ChannelGains g = random_gains(2, 0, 5);
  const double noise = 1.0;  // absurdly loud floor forces the cap
  Eigen::VectorXd p(2);
  p << 40.0, 40.0;
  Eigen::VectorXd next = primary_power_update(p, g, noise, kCfg);
  CHECK(next(0) == kCfg.pn_power_max_dbm);
  CHECK(next(1) == kCfg.pn_power_max_dbm);

  PlaygroundConfig narrow = kCfg;
  narrow.pn_power_min_dbm = 39.0;
  narrow.pn_power_max_dbm = 39.5;
  Eigen::VectorXd clamped =
      primary_power_update(p, g, dbm_to_mw(-130), narrow);
  for (int i = 0; i < 2; ++i) {
    CHECK(clamped(i) >= 39.0);
    CHECK(clamped(i) <= 39.5);
  }
}

TEST_CASE("update is positively homogeneous when noise vanishes") {
  ChannelGains g = random_gains(4, 0, 8);
  const double noise = 1e-280;
  Eigen::VectorXd p(4);
  p << 1.0, -4.0, 9.0, 3.0;
  Eigen::VectorXd a = primary_power_update(p, g, noise, kCfg);
  Eigen::VectorXd b =
      primary_power_update((p.array() + 3.0).matrix(), g, noise, kCfg);
  for (int i = 0; i < 4; ++i)
    if (a(i) < kCfg.pn_power_max_dbm - 3.1)
      CHECK(b(i) - a(i) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("primary control converges to a fixed point inside the range") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Scenario s = generate_scenario(kCfg, 8, seed);
    ChannelGains g = gain_matrices(s);
    const double noise = kCfg.noise_mw();
    PrimaryControlResult r = run_primary_power_control(g, noise, kCfg);
    CHECK(r.converged);
    CHECK(r.iterations <= 200);
    REQUIRE(r.pn_dbm.size() == 8);
    for (int i = 0; i < 8; ++i) {
      CHECK(r.pn_dbm(i) >= kCfg.pn_power_min_dbm);
      CHECK(r.pn_dbm(i) <= kCfg.pn_power_max_dbm);
    }
    Eigen::VectorXd again = primary_power_update(r.pn_dbm, g, noise, kCfg);
    CHECK((again - r.pn_dbm).cwiseAbs().maxCoeff() < 0.01);
  }
}

TEST_CASE("degenerate primary populations are handled directly") {
  ChannelGains g1 = random_gains(1, 0, 9);
  PrimaryControlResult one = run_primary_power_control(g1, 1e-13, kCfg);
  CHECK(one.converged);
  REQUIRE(one.pn_dbm.size() == 1);
  CHECK(one.pn_dbm(0) == kCfg.pn_power_max_dbm);

  ChannelGains g0 = random_gains(0, 0, 9);
  PrimaryControlResult zero = run_primary_power_control(g0, 1e-13, kCfg);
  CHECK(zero.converged);
  CHECK(zero.pn_dbm.size() == 0);
}

TEST_CASE("converged product of SINRs is near the two-link grid optimum") {
  // Mirrors the acceptance check at unit scale: the update's fixed point
  // should essentially maximize the SINR product over the clamped box.
  for (std::uint64_t seed : {31ull, 32ull, 33ull, 34ull, 35ull}) {
    ChannelGains g = random_gains(2, 0, seed);
    const double noise = dbm_to_mw(-130.0);
    PrimaryControlResult r = run_primary_power_control(g, noise, kCfg);
    PowerState st = PowerState::primary_only(r.pn_dbm, 0);
    double converged = primary_sinr(st, g, noise).array().log().sum();

    double best = -1e300;
    for (double p0 = kCfg.pn_power_min_dbm; p0 <= kCfg.pn_power_max_dbm + 1e-9;
         p0 += 0.1)
      for (double p1 = kCfg.pn_power_min_dbm;
           p1 <= kCfg.pn_power_max_dbm + 1e-9; p1 += 0.1) {
        Eigen::VectorXd p(2);
        p << p0, p1;
        PowerState grid_state = PowerState::primary_only(p, 0);
        best = std::max(best,
                        primary_sinr(grid_state, g, noise).array().log().sum());
      }
    CHECK(std::exp(converged - best) > 0.99);
  }
}

TEST_CASE("fixed-target update moves power by the target ratio in dB") {
  CHECK(fm_update(0.0, 2.0, 1.0, kCfg) ==
        doctest::Approx(3.010299956639812).epsilon(1e-14));
  CHECK(fm_update(10.0, 0.5, 0.5, kCfg) == doctest::Approx(10.0));
  CHECK(fm_update(18.0, 10.0, 1.0, kCfg) == kCfg.sn_power_max_dbm);
  CHECK(fm_update(-25.0, 1.0, 10.0, kCfg) == kCfg.sn_power_min_dbm);
  CHECK_THROWS_AS(fm_update(0.0, 0.0, 1.0, kCfg), std::domain_error);
  CHECK_THROWS_AS(fm_update(0.0, 1.0, 0.0, kCfg), std::domain_error);
  CHECK_THROWS_AS(fm_update(0.0, 1.0, -2.0, kCfg), std::domain_error);
}

TEST_CASE("target ladder mirrors the mode thresholds") {
  TargetLadder ladder = TargetLadder::from_amc_table(kTable);
  REQUIRE(ladder.targets.size() == 15);
  for (int i = 0; i < 15; ++i)
    CHECK(ladder.targets[i] == kTable.modes[i].sinr_threshold);
  for (int i = 1; i < 15; ++i)
    CHECK(ladder.targets[i] > ladder.targets[i - 1]);
}

namespace {

struct FmFixture {
  Scenario scn;
  ChannelGains g;
  PrimaryControlResult pc;
  std::vector<int> nearest;
  std::vector<int> su_types;
  double noise = 0.0;

  explicit FmFixture(std::uint64_t seed, int n_p = 8) {
    scn = generate_scenario(kCfg, n_p, seed);
    g = gain_matrices(scn);
    noise = kCfg.noise_mw();
    pc = run_primary_power_control(g, noise, kCfg);
    nearest = nearest_primary_links(g, pc.pn_dbm);
    PowerState base = PowerState::primary_only(pc.pn_dbm, scn.su_count());
    Eigen::VectorXd sinr = primary_sinr(base, g, noise);
    su_types.resize(scn.su_count());
    for (int k = 0; k < scn.su_count(); ++k)
      su_types[k] =
          modulation_type_index(mode_for_sinr(sinr(nearest[k]), kTable));
  }
};

}  // namespace

TEST_CASE("modulation-guarded control keeps every member's link type fixed") {
  TargetLadder ladder = TargetLadder::from_amc_table(kTable);
  int transmitting = 0, blocked = 0, off = 0;
  for (std::uint64_t seed : {101ull, 102ull, 103ull, 104ull, 105ull}) {
    FmFixture f(seed);
    FmResult fm = fm_with_modulation_constraint(
        f.g, f.pc.pn_dbm, f.nearest, f.su_types, ladder, kTable, kCfg, f.noise);
    REQUIRE(fm.decisions.size() == 4);

    PowerState final_state = PowerState::primary_only(f.pc.pn_dbm, 4);
    for (int k = 0; k < 4; ++k) {
      const SuDecision& d = fm.decisions[k];
      if (d.kind == SuDecisionKind::kTransmit) {
        ++transmitting;
        final_state.sn_active[k] = true;
        final_state.sn_dbm(k) = d.power_dbm;
        CHECK(d.power_dbm >= kCfg.sn_power_min_dbm);
        CHECK(d.power_dbm <= kCfg.sn_power_max_dbm);
        CHECK(d.ladder_rung >= 0);
        CHECK(d.ladder_rung <= 14);
      } else if (d.kind == SuDecisionKind::kBlocked) {
        ++blocked;
        CHECK(f.su_types[k] == 0);  // only the lowest alphabet blocks
      } else {
        ++off;
      }
    }

    Eigen::VectorXd sinr = primary_sinr(final_state, f.g, f.noise);
    for (int k = 0; k < 4; ++k) {
      if (fm.decisions[k].kind != SuDecisionKind::kTransmit) continue;
      int type =
          modulation_type_index(mode_for_sinr(sinr(f.nearest[k]), kTable));
      CHECK(type == f.su_types[k]);
    }
  }
  // Across five scenarios the procedure must exercise real transmission.
  CHECK(transmitting > 0);
}

TEST_CASE("modulation-guarded control is deterministic and traceable") {
  TargetLadder ladder = TargetLadder::from_amc_table(kTable);
  FmFixture f(77);
  FmResult a = fm_with_modulation_constraint(f.g, f.pc.pn_dbm, f.nearest,
                                             f.su_types, ladder, kTable, kCfg,
                                             f.noise, true);
  FmResult b = fm_with_modulation_constraint(f.g, f.pc.pn_dbm, f.nearest,
                                             f.su_types, ladder, kTable, kCfg,
                                             f.noise, true);
  REQUIRE(a.trace.size() == b.trace.size());
  CHECK(!a.trace.empty());
  for (std::size_t t = 0; t < a.trace.size(); ++t) {
    CHECK(a.trace[t].sn_dbm.cwiseEqual(b.trace[t].sn_dbm).all());
    CHECK(a.trace[t].sn_active == b.trace[t].sn_active);
    REQUIRE(a.trace[t].sn_active.size() == 4);
  }
  for (int k = 0; k < 4; ++k) {
    CHECK(a.decisions[k].kind == b.decisions[k].kind);
    CHECK(a.decisions[k].power_dbm == b.decisions[k].power_dbm);
    CHECK(a.decisions[k].ladder_rung == b.decisions[k].ladder_rung);
  }

  FmResult no_trace = fm_with_modulation_constraint(
      f.g, f.pc.pn_dbm, f.nearest, f.su_types, ladder, kTable, kCfg, f.noise);
  CHECK(no_trace.trace.empty());
}

TEST_CASE("secondaries with nothing to protect transmit at the maximum") {
  TargetLadder ladder = TargetLadder::from_amc_table(kTable);
  ChannelGains g = random_gains(0, 3, 50);
  Eigen::VectorXd no_pn(0);
  FmResult fm = fm_with_modulation_constraint(g, no_pn, {-1, -1, -1},
                                              {0, 0, 0}, ladder, kTable, kCfg,
                                              kCfg.noise_mw());
  for (const SuDecision& d : fm.decisions) {
    CHECK(d.kind == SuDecisionKind::kTransmit);
    CHECK(d.power_dbm == kCfg.sn_power_max_dbm);
  }
}
