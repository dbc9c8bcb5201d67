#include "dsa/playground.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dsa/util.hpp"

namespace dsa {

namespace {

constexpr double kMinPathDistanceKm = 1e-3;  // 1 m floor under the path law
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_coord(double v, double side) {
  double w = std::fmod(v, side);
  if (w < 0.0) w += side;
  return w;
}

double axis_gap(double a, double b, double side) {
  double d = std::fabs(a - b);
  return std::min(d, side - d);
}

}  // namespace

Position PlaygroundConfig::bs_position(int index) const {
  if (index < 0 || index >= bs_count())
    throw std::invalid_argument("bs index out of range");
  int col = index % grid_side;
  int row = index / grid_side;
  return {(col + 0.5) * bs_spacing_m, (row + 0.5) * bs_spacing_m};
}

double PlaygroundConfig::noise_mw() const { return dbm_to_mw(noise_power_dbm); }

void PlaygroundConfig::validate() const {
  if (grid_side < 1) throw std::invalid_argument("grid_side must be >= 1");
  if (bs_spacing_m <= 0.0)
    throw std::invalid_argument("bs_spacing_m must be positive");
  if (su_pair_count < 0)
    throw std::invalid_argument("su_pair_count must be >= 0");
  if (su_link_radius_m <= 0.0)
    throw std::invalid_argument("su_link_radius_m must be positive");
  if (pn_power_min_dbm > pn_power_max_dbm)
    throw std::invalid_argument("primary power range inverted");
  if (sn_power_min_dbm > sn_power_max_dbm)
    throw std::invalid_argument("secondary power range inverted");
  if (shadowing_sigma_db < 0.0)
    throw std::invalid_argument("shadowing_sigma_db must be >= 0");
}

double torus_distance_km(const Position& a, const Position& b,
                         const PlaygroundConfig& cfg) {
  double side = cfg.side_m();
  double ax = wrap_coord(a.x, side), ay = wrap_coord(a.y, side);
  double bx = wrap_coord(b.x, side), by = wrap_coord(b.y, side);
  double dx = axis_gap(ax, bx, side);
  double dy = axis_gap(ay, by, side);
  return std::sqrt(dx * dx + dy * dy) / 1000.0;
}

double path_gain_linear(double distance_km, double shadow_db,
                        const PlaygroundConfig& cfg) {
  if (!(distance_km >= 0.0) || !std::isfinite(shadow_db))
    throw std::domain_error("invalid path parameters");
  double d = std::max(distance_km, kMinPathDistanceKm);
  double loss_db = 128.1 + 37.6 * std::log10(d) + cfg.penetration_loss_db +
                   shadow_db;
  return db_to_linear(-loss_db);
}

double Scenario::load() const {
  return static_cast<double>(primary_links.size()) / cfg.bs_count();
}

Scenario generate_scenario(const PlaygroundConfig& cfg, int n_p,
                           std::uint64_t seed) {
  cfg.validate();
  if (n_p < 0 || n_p > cfg.bs_count())
    throw std::invalid_argument("primary link count exceeds the grid");

  Scenario s;
  s.cfg = cfg;
  s.seed = seed;

  const int n_bs = cfg.bs_count();
  const double side = cfg.side_m();

  std::mt19937_64 rng_pu(substream(seed, "pu"));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> shadow(0.0, cfg.shadowing_sigma_db);

  std::vector<bool> claimed(n_bs, false);
  s.primary_links.reserve(n_p);
  for (int i = 0; i < n_p; ++i) {
    PrimaryLink link;
    for (;;) {
      link.pu = {uni(rng_pu) * side, uni(rng_pu) * side};
      link.bs_shadows_db.resize(n_bs);
      int best = 0;
      double best_gain = -1.0;
      for (int j = 0; j < n_bs; ++j) {
        link.bs_shadows_db[j] = shadow(rng_pu);
        double gain = path_gain_linear(
            torus_distance_km(cfg.bs_position(j), link.pu, cfg),
            link.bs_shadows_db[j], cfg);
        if (gain > best_gain) {
          best_gain = gain;
          best = j;
        }
      }
      if (!claimed[best]) {
        link.bs_index = best;
        claimed[best] = true;
        break;
      }
      // Strongest station already serves another receiver: redraw entirely.
    }
    s.primary_links.push_back(std::move(link));
  }

  std::mt19937_64 rng_su(substream(seed, "su"));
  s.su_pairs.reserve(cfg.su_pair_count);
  for (int k = 0; k < cfg.su_pair_count; ++k) {
    SuPair pair;
    pair.tx = {uni(rng_su) * side, uni(rng_su) * side};
    double r = cfg.su_link_radius_m * std::sqrt(uni(rng_su));
    double theta = kTwoPi * uni(rng_su);
    pair.rx = {wrap_coord(pair.tx.x + r * std::cos(theta), side),
               wrap_coord(pair.tx.y + r * std::sin(theta), side)};
    s.su_pairs.push_back(pair);
  }

  return s;
}

ChannelGains gain_matrices(const Scenario& s) {
  const PlaygroundConfig& cfg = s.cfg;
  const int n_p = s.primary_count();
  const int n_s = s.su_count();

  ChannelGains g;
  g.gpp.resize(n_p, n_p);
  g.gps.resize(n_p, n_s);
  g.gsp.resize(n_s, n_p);
  g.gss.resize(n_s, n_s);

  for (int i = 0; i < n_p; ++i) {
    const PrimaryLink& rx = s.primary_links[i];
    for (int j = 0; j < n_p; ++j) {
      int bs = s.primary_links[j].bs_index;
      g.gpp(i, j) = path_gain_linear(
          torus_distance_km(cfg.bs_position(bs), rx.pu, cfg),
          rx.bs_shadows_db[bs], cfg);
    }
  }

  // Secondary-side paths draw fresh shadowing from the scenario seed in a
  // fixed order, so the matrices are a pure function of the scenario.
  std::mt19937_64 rng(substream(s.seed, "xgain"));
  std::normal_distribution<double> shadow(0.0, cfg.shadowing_sigma_db);

  for (int i = 0; i < n_p; ++i)
    for (int j = 0; j < n_s; ++j)
      g.gps(i, j) = path_gain_linear(
          torus_distance_km(s.su_pairs[j].tx, s.primary_links[i].pu, cfg),
          shadow(rng), cfg);

  for (int i = 0; i < n_s; ++i)
    for (int j = 0; j < n_p; ++j) {
      int bs = s.primary_links[j].bs_index;
      g.gsp(i, j) = path_gain_linear(
          torus_distance_km(cfg.bs_position(bs), s.su_pairs[i].rx, cfg),
          shadow(rng), cfg);
    }

  for (int i = 0; i < n_s; ++i)
    for (int j = 0; j < n_s; ++j)
      g.gss(i, j) = path_gain_linear(
          torus_distance_km(s.su_pairs[j].tx, s.su_pairs[i].rx, cfg),
          shadow(rng), cfg);

  return g;
}

namespace {

constexpr const char* kScenarioHeader = "dsa-scenario v1";

void put_kv(std::ostream& os, const char* key, double v) {
  os << key << ' ' << full_num(v) << '\n';
}

std::istringstream expect_line(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("scenario document truncated at " + key);
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key)
    throw std::runtime_error("scenario document: expected '" + key +
                             "', found '" + k + "'");
  return ls;
}

double read_kv(std::istream& is, const std::string& key) {
  auto ls = expect_line(is, key);
  double v;
  if (!(ls >> v)) throw std::runtime_error("scenario document: bad " + key);
  return v;
}

}  // namespace

void save_scenario(const Scenario& s, std::ostream& os) {
  os << kScenarioHeader << '\n';
  os << "seed " << s.seed << '\n';
  put_kv(os, "grid_side", s.cfg.grid_side);
  put_kv(os, "bs_spacing_m", s.cfg.bs_spacing_m);
  put_kv(os, "su_pair_count", s.cfg.su_pair_count);
  put_kv(os, "su_link_radius_m", s.cfg.su_link_radius_m);
  put_kv(os, "noise_power_dbm", s.cfg.noise_power_dbm);
  put_kv(os, "pn_power_min_dbm", s.cfg.pn_power_min_dbm);
  put_kv(os, "pn_power_max_dbm", s.cfg.pn_power_max_dbm);
  put_kv(os, "sn_power_min_dbm", s.cfg.sn_power_min_dbm);
  put_kv(os, "sn_power_max_dbm", s.cfg.sn_power_max_dbm);
  put_kv(os, "penetration_loss_db", s.cfg.penetration_loss_db);
  put_kv(os, "shadowing_sigma_db", s.cfg.shadowing_sigma_db);
  os << "primary_links " << s.primary_count() << '\n';
  for (int i = 0; i < s.primary_count(); ++i) {
    const PrimaryLink& l = s.primary_links[i];
    os << "link " << i << " bs " << l.bs_index << " pu " << full_num(l.pu.x)
       << ' ' << full_num(l.pu.y) << " shadows";
    for (double v : l.bs_shadows_db) os << ' ' << full_num(v);
    os << '\n';
  }
  os << "su_pairs " << s.su_count() << '\n';
  for (int k = 0; k < s.su_count(); ++k) {
    const SuPair& p = s.su_pairs[k];
    os << "su " << k << " tx " << full_num(p.tx.x) << ' ' << full_num(p.tx.y)
       << " rx " << full_num(p.rx.x) << ' ' << full_num(p.rx.y) << '\n';
  }
}

Scenario load_scenario(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != kScenarioHeader)
    throw std::runtime_error("not a recognized scenario document");

  Scenario s;
  {
    auto ls = expect_line(is, "seed");
    if (!(ls >> s.seed)) throw std::runtime_error("scenario: bad seed");
  }
  s.cfg.grid_side = static_cast<int>(read_kv(is, "grid_side"));
  s.cfg.bs_spacing_m = read_kv(is, "bs_spacing_m");
  s.cfg.su_pair_count = static_cast<int>(read_kv(is, "su_pair_count"));
  s.cfg.su_link_radius_m = read_kv(is, "su_link_radius_m");
  s.cfg.noise_power_dbm = read_kv(is, "noise_power_dbm");
  s.cfg.pn_power_min_dbm = read_kv(is, "pn_power_min_dbm");
  s.cfg.pn_power_max_dbm = read_kv(is, "pn_power_max_dbm");
  s.cfg.sn_power_min_dbm = read_kv(is, "sn_power_min_dbm");
  s.cfg.sn_power_max_dbm = read_kv(is, "sn_power_max_dbm");
  s.cfg.penetration_loss_db = read_kv(is, "penetration_loss_db");
  s.cfg.shadowing_sigma_db = read_kv(is, "shadowing_sigma_db");
  s.cfg.validate();

  int n_p = static_cast<int>(read_kv(is, "primary_links"));
  s.primary_links.resize(n_p);
  for (int i = 0; i < n_p; ++i) {
    auto ls = expect_line(is, "link");
    int idx;
    std::string tok;
    PrimaryLink& l = s.primary_links[i];
    if (!(ls >> idx >> tok >> l.bs_index) || tok != "bs" || idx != i)
      throw std::runtime_error("scenario: bad link record");
    if (!(ls >> tok >> l.pu.x >> l.pu.y) || tok != "pu")
      throw std::runtime_error("scenario: bad link position");
    if (!(ls >> tok) || tok != "shadows")
      throw std::runtime_error("scenario: bad link shadows");
    l.bs_shadows_db.resize(s.cfg.bs_count());
    for (double& v : l.bs_shadows_db)
      if (!(ls >> v)) throw std::runtime_error("scenario: short shadow list");
    if (l.bs_index < 0 || l.bs_index >= s.cfg.bs_count())
      throw std::runtime_error("scenario: bs index out of range");
  }

  int n_s = static_cast<int>(read_kv(is, "su_pairs"));
  s.su_pairs.resize(n_s);
  for (int k = 0; k < n_s; ++k) {
    auto ls = expect_line(is, "su");
    int idx;
    std::string tok;
    SuPair& p = s.su_pairs[k];
    if (!(ls >> idx >> tok >> p.tx.x >> p.tx.y) || tok != "tx" || idx != k)
      throw std::runtime_error("scenario: bad su record");
    if (!(ls >> tok >> p.rx.x >> p.rx.y) || tok != "rx")
      throw std::runtime_error("scenario: bad su receiver");
  }
  return s;
}

void save_scenario_file(const Scenario& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  save_scenario(s, os);
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return load_scenario(is);
}

}  // namespace dsa
