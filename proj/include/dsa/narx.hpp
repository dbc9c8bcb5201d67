#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dsa {

// Two exogenous inputs (u1: own transmit power, u2: sensed modulation type),
// one fed-back output (y: nearest-link throughput). The regressor for step n
// holds u taps n..n-d_u (newest first) and y taps n-1..n-d_y.
struct NarxConfig {
  int hidden_nodes = 50;
  int d_u1 = 7;
  int d_u2 = 7;
  int d_y = 7;
  double lm_lambda0 = 1e-3;
  double lm_lambda_up = 10.0;
  double lm_lambda_down = 0.1;
  int lm_max_rejections = 20;
  int max_epochs = 200;
  int early_stop_patience = 6;

  int regressor_length() const { return (d_u1 + 1) + (d_u2 + 1) + d_y; }
  // First step index with a full set of taps.
  int warmup() const;
  void validate() const;  // throws std::invalid_argument
};

// x -> (x - shift) / scale. Fitted so the training range maps onto [-1, 1];
// values outside that range pass through unclipped.
struct AffineNorm {
  double shift = 0.0;
  double scale = 1.0;
  double apply(double x) const { return (x - shift) / scale; }
  double invert(double z) const { return z * scale + shift; }
  static AffineNorm from_min_max(double lo, double hi);
};

// One hidden tanh layer, linear output. Weights act in normalized space.
struct NarxModel {
  NarxConfig cfg;
  Eigen::MatrixXd input_weights;   // hidden_nodes x regressor_length
  Eigen::VectorXd input_biases;    // hidden_nodes
  Eigen::VectorXd output_weights;  // hidden_nodes
  double output_bias = 0.0;
  AffineNorm norm_u1, norm_u2, norm_y;

  int parameter_count() const;
};

// Weights and biases drawn uniformly from [-0.5, 0.5] / sqrt(fan-in).
NarxModel init_model(const NarxConfig& cfg, std::uint64_t seed);

// Normalized-space primitives.
double forward(const NarxModel& m, const Eigen::VectorXd& regressor);
Eigen::VectorXd assemble_regressor(const NarxConfig& cfg,
                                   const std::vector<double>& u1n,
                                   const std::vector<double>& u2n,
                                   const std::vector<double>& yn, int step);

// Raw-unit series prediction with measured outputs in the taps; returns one
// prediction per step from warmup() to the end (length n - warmup()).
std::vector<double> open_loop_predict(const NarxModel& m,
                                      const std::vector<double>& u1,
                                      const std::vector<double>& u2,
                                      const std::vector<double>& y);

// Raw-unit multi-step prediction that feeds its own outputs back into the
// y taps. Histories must hold at least the matching delay counts; the last
// history element is the most recent sample. Returns one prediction per
// future step (an empty future yields an empty result).
std::vector<double> closed_loop_predict(const NarxModel& m,
                                        const std::vector<double>& u1_hist,
                                        const std::vector<double>& u2_hist,
                                        const std::vector<double>& y_hist,
                                        const std::vector<double>& u1_future,
                                        const std::vector<double>& u2_future);

struct Sequence {
  std::vector<double> u1;  // dBm
  std::vector<double> u2;  // modulation type index, 0/1/2
  std::vector<double> y;   // kbps
  double load = 0.0;
  int su_index = -1;
};

struct TrainingSet {
  std::vector<Sequence> sequences;
  double train_frac = 0.70;
  double val_frac = 0.15;
  double test_frac = 0.15;
};

// Usable (post-warmup) sample counts.
int total_samples(const TrainingSet& data, const NarxConfig& cfg);

enum class SplitPart { kTrain, kVal, kTest };

// Half-open range [begin, end) of prediction steps one sequence contributes
// to a split part. begin of the train part is the warmup boundary.
struct SplitRange {
  int begin = 0;
  int end = 0;
};
SplitRange split_range(const Sequence& s, const TrainingSet& data,
                       SplitPart part, const NarxConfig& cfg);

// Assembled regressor matrix (one row per sample) and target vector for one
// split part. Each sequence is cut into contiguous train/val/test blocks in
// time order, so later blocks never leak into training taps. Normalization
// is applied with the model's constants.
void assemble_split(const NarxModel& m, const TrainingSet& data,
                    SplitPart part, Eigen::MatrixXd* regressors,
                    Eigen::VectorXd* targets);

// Fit normalization from the training blocks only.
void fit_normalization(NarxModel& m, const TrainingSet& data);

// Per-sample gradient of the residual e_s = t_s - yhat_s with respect to
// every weight, rows in parameter order: input_weights row-major, then
// input_biases, output_weights, output_bias.
Eigen::MatrixXd error_jacobian(const NarxModel& m,
                               const Eigen::MatrixXd& regressors,
                               const Eigen::VectorXd& targets,
                               Eigen::VectorXd* errors);

struct EpochRecord {
  int epoch = 0;
  double train_mse = 0.0;
  double val_mse = 0.0;
  double lambda = 0.0;
  bool accepted = false;
};

struct TrainResult {
  NarxModel model;  // best-validation weights
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_mse = 0.0;
  bool aborted_on_rejections = false;
};

// Levenberg-Marquardt on the open-loop residuals: solve
// (J^T J + lambda I) d = J^T e, accept the step only if training MSE drops.
// lambda shrinks on acceptance and grows on rejection; training stops on the
// epoch budget, the early-stop patience (validation MSE), or a run of
// rejections. Deterministic given (model, data, cfg).
TrainResult train_lm(const NarxModel& start, const TrainingSet& data);

double mse(const NarxModel& m, const Eigen::MatrixXd& regressors,
           const Eigen::VectorXd& targets);

// Versioned text round-trip, 17 significant digits per value.
void save_model(const NarxModel& m, std::ostream& os);
NarxModel load_model(std::istream& is);
void save_model_file(const NarxModel& m, const std::string& path);
NarxModel load_model_file(const std::string& path);

// Versioned text round-trip for datasets.
void save_training_set(const TrainingSet& data, std::ostream& os);
TrainingSet load_training_set(std::istream& is);
void save_training_set_file(const TrainingSet& data, const std::string& path);
TrainingSet load_training_set_file(const std::string& path);

}  // namespace dsa
