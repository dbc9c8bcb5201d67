#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dsa {

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;
};

// Wrap-around square playground holding a fixed base-station grid, uniformly
// dropped primary receivers, and short secondary links.
struct PlaygroundConfig {
  int grid_side = 5;
  double bs_spacing_m = 200.0;
  int su_pair_count = 4;
  double su_link_radius_m = 50.0;
  double noise_power_dbm = -130.0;
  double pn_power_min_dbm = -20.0;
  double pn_power_max_dbm = 40.0;
  double sn_power_min_dbm = -30.0;
  double sn_power_max_dbm = 20.0;
  double penetration_loss_db = 10.0;
  double shadowing_sigma_db = 6.0;

  int bs_count() const { return grid_side * grid_side; }
  double side_m() const { return grid_side * bs_spacing_m; }
  Position bs_position(int index) const;
  double noise_mw() const;
  void validate() const;  // throws std::invalid_argument
};

// Minimum-image distance on the wrap-around square, in kilometers.
double torus_distance_km(const Position& a, const Position& b,
                         const PlaygroundConfig& cfg);

// Linear power gain of one path: urban-macro distance law plus penetration
// plus a caller-supplied shadowing realization. Distances below 1 m are
// clamped to 1 m; a non-positive or non-finite distance is a caller bug.
double path_gain_linear(double distance_km, double shadow_db,
                        const PlaygroundConfig& cfg);

struct PrimaryLink {
  int bs_index = -1;
  Position pu;
  // One shadowing draw per base station toward this receiver; frozen at
  // placement time so attachment and the gain matrices agree.
  std::vector<double> bs_shadows_db;
};

struct SuPair {
  Position tx;
  Position rx;
};

struct Scenario {
  PlaygroundConfig cfg;
  std::uint64_t seed = 0;
  std::vector<PrimaryLink> primary_links;
  std::vector<SuPair> su_pairs;

  int primary_count() const { return static_cast<int>(primary_links.size()); }
  int su_count() const { return static_cast<int>(su_pairs.size()); }
  double load() const;
};

// Pure function of (cfg, n_p, seed). Primary receivers attach to their
// strongest base station; a receiver whose strongest station is already
// claimed is redrawn. Each secondary receiver lands within su_link_radius_m
// of its transmitter.
Scenario generate_scenario(const PlaygroundConfig& cfg, int n_p,
                           std::uint64_t seed);

// Row index = receiver, column index = transmitter.
struct ChannelGains {
  Eigen::MatrixXd gpp;  // primary tx -> primary rx
  Eigen::MatrixXd gps;  // secondary tx -> primary rx
  Eigen::MatrixXd gsp;  // primary tx -> secondary rx
  Eigen::MatrixXd gss;  // secondary tx -> secondary rx
};

// Pure function of the scenario. gpp reuses the shadowing draws stored at
// placement; the three secondary-side matrices draw theirs from the scenario
// seed in a fixed order.
ChannelGains gain_matrices(const Scenario& s);

// Versioned field-per-line text document; positions in meters, seed recorded.
void save_scenario(const Scenario& s, std::ostream& os);
Scenario load_scenario(std::istream& is);
void save_scenario_file(const Scenario& s, const std::string& path);
Scenario load_scenario_file(const std::string& path);

}  // namespace dsa
