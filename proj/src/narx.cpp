#include "dsa/narx.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dsa/util.hpp"

namespace dsa {

int NarxConfig::warmup() const { return std::max(d_u1, d_u2); }

void NarxConfig::validate() const {
  if (hidden_nodes < 1)
    throw std::invalid_argument("hidden_nodes must be >= 1");
  if (d_u1 < 0 || d_u2 < 0 || d_y < 0)
    throw std::invalid_argument("delay orders must be >= 0");
  // The fed-back channel may not look further into the past than the inputs;
  // otherwise the first predictable step has no complete tap set.
  if (d_u1 < d_y || d_u2 < d_y)
    throw std::invalid_argument("input delays must cover the output delay");
  if (!(lm_lambda0 > 0.0) || !(lm_lambda_up > 1.0) ||
      !(lm_lambda_down > 0.0) || lm_lambda_down >= 1.0)
    throw std::invalid_argument("bad LM damping parameters");
  if (max_epochs < 1 || early_stop_patience < 1 || lm_max_rejections < 1)
    throw std::invalid_argument("bad training schedule parameters");
}

AffineNorm AffineNorm::from_min_max(double lo, double hi) {
  AffineNorm n;
  if (hi > lo) {
    n.shift = 0.5 * (hi + lo);
    n.scale = 0.5 * (hi - lo);
  } else {
    n.shift = lo;  // constant signal maps to zero with unit scale
    n.scale = 1.0;
  }
  return n;
}

int NarxModel::parameter_count() const {
  int h = cfg.hidden_nodes;
  return h * cfg.regressor_length() + h + h + 1;
}

NarxModel init_model(const NarxConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  NarxModel m;
  m.cfg = cfg;
  const int h = cfg.hidden_nodes;
  const int r = cfg.regressor_length();
  m.input_weights.resize(h, r);
  m.input_biases.resize(h);
  m.output_weights.resize(h);

  std::mt19937_64 rng(substream(seed, "narx-init"));
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  const double in_scale = 1.0 / std::sqrt(static_cast<double>(r));
  const double out_scale = 1.0 / std::sqrt(static_cast<double>(h));
  for (int k = 0; k < h; ++k)
    for (int j = 0; j < r; ++j) m.input_weights(k, j) = uni(rng) * in_scale;
  for (int k = 0; k < h; ++k) m.input_biases(k) = uni(rng) * in_scale;
  for (int k = 0; k < h; ++k) m.output_weights(k) = uni(rng) * out_scale;
  m.output_bias = uni(rng) * out_scale;
  return m;
}

double forward(const NarxModel& m, const Eigen::VectorXd& regressor) {
  if (regressor.size() != m.cfg.regressor_length())
    throw std::invalid_argument("regressor length mismatch");
  Eigen::VectorXd hidden =
      (m.input_weights * regressor + m.input_biases).array().tanh();
  return m.output_weights.dot(hidden) + m.output_bias;
}

Eigen::VectorXd assemble_regressor(const NarxConfig& cfg,
                                   const std::vector<double>& u1n,
                                   const std::vector<double>& u2n,
                                   const std::vector<double>& yn, int step) {
  if (step < cfg.warmup() || step >= static_cast<int>(u1n.size()))
    throw std::invalid_argument("step outside the predictable range");
  Eigen::VectorXd x(cfg.regressor_length());
  int p = 0;
  for (int j = 0; j <= cfg.d_u1; ++j) x(p++) = u1n[step - j];
  for (int j = 0; j <= cfg.d_u2; ++j) x(p++) = u2n[step - j];
  for (int j = 1; j <= cfg.d_y; ++j) x(p++) = yn[step - j];
  return x;
}

namespace {

std::vector<double> normalize_series(const AffineNorm& n,
                                     const std::vector<double>& raw) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = n.apply(raw[i]);
  return out;
}

void check_series(const NarxModel& m, const std::vector<double>& u1,
                  const std::vector<double>& u2, const std::vector<double>& y) {
  if (u1.size() != u2.size() || u1.size() != y.size())
    throw std::invalid_argument("series lengths differ");
  (void)m;
}

}  // namespace

std::vector<double> open_loop_predict(const NarxModel& m,
                                      const std::vector<double>& u1,
                                      const std::vector<double>& u2,
                                      const std::vector<double>& y) {
  check_series(m, u1, u2, y);
  const int n = static_cast<int>(u1.size());
  const int w = m.cfg.warmup();
  if (n <= w) return {};
  std::vector<double> u1n = normalize_series(m.norm_u1, u1);
  std::vector<double> u2n = normalize_series(m.norm_u2, u2);
  std::vector<double> yn = normalize_series(m.norm_y, y);
  std::vector<double> out;
  out.reserve(n - w);
  for (int step = w; step < n; ++step)
    out.push_back(
        m.norm_y.invert(forward(m, assemble_regressor(m.cfg, u1n, u2n, yn, step))));
  return out;
}

std::vector<double> closed_loop_predict(const NarxModel& m,
                                        const std::vector<double>& u1_hist,
                                        const std::vector<double>& u2_hist,
                                        const std::vector<double>& y_hist,
                                        const std::vector<double>& u1_future,
                                        const std::vector<double>& u2_future) {
  const NarxConfig& cfg = m.cfg;
  if (static_cast<int>(u1_hist.size()) < cfg.d_u1 ||
      static_cast<int>(u2_hist.size()) < cfg.d_u2 ||
      static_cast<int>(y_hist.size()) < cfg.d_y)
    throw std::invalid_argument("seed history shorter than the delay lines");
  if (u1_future.size() != u2_future.size())
    throw std::invalid_argument("future input lengths differ");

  // Working lines in normalized space; predictions are appended to the y
  // line so later steps regress on them.
  std::vector<double> u1n = normalize_series(m.norm_u1, u1_hist);
  std::vector<double> u2n = normalize_series(m.norm_u2, u2_hist);
  std::vector<double> yn = normalize_series(m.norm_y, y_hist);
  const int h1 = static_cast<int>(u1n.size());
  const int h2 = static_cast<int>(u2n.size());
  const int hy = static_cast<int>(yn.size());
  for (double v : u1_future) u1n.push_back(m.norm_u1.apply(v));
  for (double v : u2_future) u2n.push_back(m.norm_u2.apply(v));

  std::vector<double> out;
  out.reserve(u1_future.size());
  Eigen::VectorXd x(cfg.regressor_length());
  for (int t = 0; t < static_cast<int>(u1_future.size()); ++t) {
    int p = 0;
    for (int j = 0; j <= cfg.d_u1; ++j) x(p++) = u1n[h1 + t - j];
    for (int j = 0; j <= cfg.d_u2; ++j) x(p++) = u2n[h2 + t - j];
    for (int j = 1; j <= cfg.d_y; ++j) x(p++) = yn[hy + t - j];
    double pred = forward(m, x);
    yn.push_back(pred);
    out.push_back(m.norm_y.invert(pred));
  }
  return out;
}

namespace {

struct SeqSplit {
  int warmup_end = 0;  // first sample step
  int train_end = 0;   // step one past the training block
  int val_end = 0;
  int seq_end = 0;
};

SeqSplit split_bounds(const Sequence& s, const TrainingSet& data,
                      const NarxConfig& cfg) {
  SeqSplit b;
  const int n = static_cast<int>(s.y.size());
  const int w = cfg.warmup();
  b.warmup_end = std::min(w, n);
  const int usable = std::max(0, n - w);
  const int n_train = static_cast<int>(usable * data.train_frac);
  const int n_val = static_cast<int>(usable * data.val_frac);
  b.train_end = b.warmup_end + n_train;
  b.val_end = b.train_end + n_val;
  b.seq_end = n;
  return b;
}

}  // namespace

SplitRange split_range(const Sequence& s, const TrainingSet& data,
                       SplitPart part, const NarxConfig& cfg) {
  SeqSplit b = split_bounds(s, data, cfg);
  switch (part) {
    case SplitPart::kTrain:
      return {b.warmup_end, b.train_end};
    case SplitPart::kVal:
      return {b.train_end, b.val_end};
    default:
      return {b.val_end, b.seq_end};
  }
}

int total_samples(const TrainingSet& data, const NarxConfig& cfg) {
  int total = 0;
  for (const Sequence& s : data.sequences)
    total += std::max(0, static_cast<int>(s.y.size()) - cfg.warmup());
  return total;
}

void fit_normalization(NarxModel& m, const TrainingSet& data) {
  double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
  double lo2 = lo1, hi2 = -lo1;
  double loy = lo1, hiy = -lo1;
  for (const Sequence& s : data.sequences) {
    check_series(m, s.u1, s.u2, s.y);
    SeqSplit b = split_bounds(s, data, m.cfg);
    // Everything a training regressor or target can touch: the head of the
    // sequence up to the end of the training block.
    for (int i = 0; i < b.train_end; ++i) {
      lo1 = std::min(lo1, s.u1[i]);
      hi1 = std::max(hi1, s.u1[i]);
      lo2 = std::min(lo2, s.u2[i]);
      hi2 = std::max(hi2, s.u2[i]);
      loy = std::min(loy, s.y[i]);
      hiy = std::max(hiy, s.y[i]);
    }
  }
  if (!std::isfinite(lo1) || !std::isfinite(loy))
    throw std::invalid_argument("no training samples to fit normalization");
  m.norm_u1 = AffineNorm::from_min_max(lo1, hi1);
  m.norm_u2 = AffineNorm::from_min_max(lo2, hi2);
  m.norm_y = AffineNorm::from_min_max(loy, hiy);
}

void assemble_split(const NarxModel& m, const TrainingSet& data,
                    SplitPart part, Eigen::MatrixXd* regressors,
                    Eigen::VectorXd* targets) {
  const NarxConfig& cfg = m.cfg;
  int count = 0;
  for (const Sequence& s : data.sequences) {
    SplitRange rng = split_range(s, data, part, cfg);
    count += std::max(0, rng.end - rng.begin);
  }
  regressors->resize(count, cfg.regressor_length());
  targets->resize(count);

  int row = 0;
  for (const Sequence& s : data.sequences) {
    check_series(m, s.u1, s.u2, s.y);
    SplitRange rng = split_range(s, data, part, cfg);
    const int lo = rng.begin;
    const int hi = rng.end;
    if (hi <= lo) continue;
    std::vector<double> u1n = normalize_series(m.norm_u1, s.u1);
    std::vector<double> u2n = normalize_series(m.norm_u2, s.u2);
    std::vector<double> yn = normalize_series(m.norm_y, s.y);
    for (int step = lo; step < hi; ++step) {
      regressors->row(row) = assemble_regressor(cfg, u1n, u2n, yn, step);
      (*targets)(row) = yn[step];
      ++row;
    }
  }
}

namespace {

Eigen::VectorXd pack_parameters(const NarxModel& m) {
  const int h = m.cfg.hidden_nodes;
  const int r = m.cfg.regressor_length();
  Eigen::VectorXd w(m.parameter_count());
  int p = 0;
  for (int k = 0; k < h; ++k)
    for (int j = 0; j < r; ++j) w(p++) = m.input_weights(k, j);
  for (int k = 0; k < h; ++k) w(p++) = m.input_biases(k);
  for (int k = 0; k < h; ++k) w(p++) = m.output_weights(k);
  w(p) = m.output_bias;
  return w;
}

void unpack_parameters(NarxModel& m, const Eigen::VectorXd& w) {
  const int h = m.cfg.hidden_nodes;
  const int r = m.cfg.regressor_length();
  int p = 0;
  for (int k = 0; k < h; ++k)
    for (int j = 0; j < r; ++j) m.input_weights(k, j) = w(p++);
  for (int k = 0; k < h; ++k) m.input_biases(k) = w(p++);
  for (int k = 0; k < h; ++k) m.output_weights(k) = w(p++);
  m.output_bias = w(p);
}

}  // namespace

Eigen::MatrixXd error_jacobian(const NarxModel& m,
                               const Eigen::MatrixXd& regressors,
                               const Eigen::VectorXd& targets,
                               Eigen::VectorXd* errors) {
  if (regressors.rows() != targets.size())
    throw std::invalid_argument("sample count mismatch");
  if (regressors.cols() != m.cfg.regressor_length())
    throw std::invalid_argument("regressor length mismatch");

  const int n = static_cast<int>(regressors.rows());
  const int h = m.cfg.hidden_nodes;
  const int r = m.cfg.regressor_length();
  Eigen::MatrixXd jac(n, m.parameter_count());
  if (errors) errors->resize(n);

  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd x = regressors.row(s).transpose();
    Eigen::VectorXd hidden = (m.input_weights * x + m.input_biases).array().tanh();
    double yhat = m.output_weights.dot(hidden) + m.output_bias;
    if (errors) (*errors)(s) = targets(s) - yhat;

    // e = t - yhat, so every entry is the negated prediction gradient.
    Eigen::VectorXd back =
        m.output_weights.array() * (1.0 - hidden.array().square());
    int p = 0;
    for (int k = 0; k < h; ++k) {
      double bk = back(k);
      for (int j = 0; j < r; ++j) jac(s, p++) = -bk * x(j);
    }
    for (int k = 0; k < h; ++k) jac(s, p++) = -back(k);
    for (int k = 0; k < h; ++k) jac(s, p++) = -hidden(k);
    jac(s, p) = -1.0;
  }
  return jac;
}

double mse(const NarxModel& m, const Eigen::MatrixXd& regressors,
           const Eigen::VectorXd& targets) {
  const int n = static_cast<int>(regressors.rows());
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (int s = 0; s < n; ++s) {
    double e = targets(s) - forward(m, regressors.row(s).transpose());
    acc += e * e;
  }
  return acc / n;
}

TrainResult train_lm(const NarxModel& start, const TrainingSet& data) {
  NarxModel model = start;
  const NarxConfig& cfg = model.cfg;
  cfg.validate();
  if (std::fabs(data.train_frac + data.val_frac + data.test_frac - 1.0) > 1e-9)
    throw std::invalid_argument("split fractions must sum to 1");

  fit_normalization(model, data);

  Eigen::MatrixXd train_x, val_x;
  Eigen::VectorXd train_t, val_t;
  assemble_split(model, data, SplitPart::kTrain, &train_x, &train_t);
  assemble_split(model, data, SplitPart::kVal, &val_x, &val_t);
  if (train_x.rows() == 0) throw std::invalid_argument("empty training split");

  TrainResult result;
  double train_mse = mse(model, train_x, train_t);
  double val_mse = mse(model, val_x, val_t);
  result.best_val_mse = val_mse;
  result.best_epoch = 0;
  Eigen::VectorXd best_w = pack_parameters(model);

  double lambda = cfg.lm_lambda0;
  int rejections_in_row = 0;
  int since_best = 0;
  const int n_params = model.parameter_count();
  const Eigen::MatrixXd identity =
      Eigen::MatrixXd::Identity(n_params, n_params);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    Eigen::VectorXd errs;
    Eigen::MatrixXd jac = error_jacobian(model, train_x, train_t, &errs);
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::VectorXd jte = jac.transpose() * errs;
    Eigen::VectorXd w = pack_parameters(model);

    bool accepted = false;
    while (!accepted) {
      Eigen::VectorXd step = (jtj + lambda * identity).ldlt().solve(jte);
      NarxModel candidate = model;
      // J holds d e / d w, so Gauss-Newton moves against the solved step.
      unpack_parameters(candidate, w - step);
      double cand_mse = mse(candidate, train_x, train_t);

      if (std::isfinite(cand_mse) && cand_mse < train_mse) {
        model = candidate;
        train_mse = cand_mse;
        lambda *= cfg.lm_lambda_down;
        rejections_in_row = 0;
        accepted = true;
        val_mse = mse(model, val_x, val_t);
        result.history.push_back({epoch, train_mse, val_mse, lambda, true});
      } else {
        lambda *= cfg.lm_lambda_up;
        ++rejections_in_row;
        result.history.push_back({epoch, cand_mse, val_mse, lambda, false});
        if (rejections_in_row >= cfg.lm_max_rejections) {
          result.aborted_on_rejections = true;
          break;
        }
      }
    }
    if (result.aborted_on_rejections) break;

    if (val_x.rows() == 0 || val_mse < result.best_val_mse) {
      result.best_val_mse = val_mse;
      result.best_epoch = epoch;
      best_w = pack_parameters(model);
      since_best = 0;
    } else {
      ++since_best;
      if (val_x.rows() > 0 && since_best >= cfg.early_stop_patience) break;
    }
  }

  unpack_parameters(model, best_w);
  result.model = model;
  return result;
}

namespace {

constexpr const char* kModelHeader = "dsa-narx v1";
constexpr const char* kDatasetHeader = "dsa-dataset v1";

void write_vector_line(std::ostream& os, const char* key,
                       const double* v, int n) {
  os << key;
  for (int i = 0; i < n; ++i) os << ' ' << full_num(v[i]);
  os << '\n';
}

std::istringstream expect_key(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("model document truncated at " + key);
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key)
    throw std::runtime_error("model document: expected '" + key + "', found '" +
                             k + "'");
  return ls;
}

double read_num(std::istream& is, const std::string& key) {
  auto ls = expect_key(is, key);
  double v;
  if (!(ls >> v)) throw std::runtime_error("model document: bad " + key);
  return v;
}

void read_values(std::istream& is, const std::string& key, double* v, int n) {
  auto ls = expect_key(is, key);
  for (int i = 0; i < n; ++i)
    if (!(ls >> v[i]))
      throw std::runtime_error("model document: short " + key + " line");
}

}  // namespace

void save_model(const NarxModel& m, std::ostream& os) {
  const int h = m.cfg.hidden_nodes;
  const int r = m.cfg.regressor_length();
  os << kModelHeader << '\n';
  os << "hidden_nodes " << h << '\n';
  os << "d_u1 " << m.cfg.d_u1 << '\n';
  os << "d_u2 " << m.cfg.d_u2 << '\n';
  os << "d_y " << m.cfg.d_y << '\n';
  os << "lm_lambda0 " << full_num(m.cfg.lm_lambda0) << '\n';
  os << "lm_lambda_up " << full_num(m.cfg.lm_lambda_up) << '\n';
  os << "lm_lambda_down " << full_num(m.cfg.lm_lambda_down) << '\n';
  os << "lm_max_rejections " << m.cfg.lm_max_rejections << '\n';
  os << "max_epochs " << m.cfg.max_epochs << '\n';
  os << "early_stop_patience " << m.cfg.early_stop_patience << '\n';
  double nu1[2] = {m.norm_u1.shift, m.norm_u1.scale};
  double nu2[2] = {m.norm_u2.shift, m.norm_u2.scale};
  double ny[2] = {m.norm_y.shift, m.norm_y.scale};
  write_vector_line(os, "norm_u1", nu1, 2);
  write_vector_line(os, "norm_u2", nu2, 2);
  write_vector_line(os, "norm_y", ny, 2);
  for (int k = 0; k < h; ++k) {
    Eigen::VectorXd row = m.input_weights.row(k).transpose();
    write_vector_line(os, "input_weights", row.data(), r);
  }
  write_vector_line(os, "input_biases", m.input_biases.data(), h);
  write_vector_line(os, "output_weights", m.output_weights.data(), h);
  os << "output_bias " << full_num(m.output_bias) << '\n';
}

NarxModel load_model(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != kModelHeader)
    throw std::runtime_error("not a recognized model document");

  NarxConfig cfg;
  cfg.hidden_nodes = static_cast<int>(read_num(is, "hidden_nodes"));
  cfg.d_u1 = static_cast<int>(read_num(is, "d_u1"));
  cfg.d_u2 = static_cast<int>(read_num(is, "d_u2"));
  cfg.d_y = static_cast<int>(read_num(is, "d_y"));
  cfg.lm_lambda0 = read_num(is, "lm_lambda0");
  cfg.lm_lambda_up = read_num(is, "lm_lambda_up");
  cfg.lm_lambda_down = read_num(is, "lm_lambda_down");
  cfg.lm_max_rejections = static_cast<int>(read_num(is, "lm_max_rejections"));
  cfg.max_epochs = static_cast<int>(read_num(is, "max_epochs"));
  cfg.early_stop_patience =
      static_cast<int>(read_num(is, "early_stop_patience"));
  cfg.validate();

  NarxModel m;
  m.cfg = cfg;
  const int h = cfg.hidden_nodes;
  const int r = cfg.regressor_length();
  double pair[2];
  read_values(is, "norm_u1", pair, 2);
  m.norm_u1 = {pair[0], pair[1]};
  read_values(is, "norm_u2", pair, 2);
  m.norm_u2 = {pair[0], pair[1]};
  read_values(is, "norm_y", pair, 2);
  m.norm_y = {pair[0], pair[1]};

  m.input_weights.resize(h, r);
  std::vector<double> row(r);
  for (int k = 0; k < h; ++k) {
    read_values(is, "input_weights", row.data(), r);
    for (int j = 0; j < r; ++j) m.input_weights(k, j) = row[j];
  }
  m.input_biases.resize(h);
  read_values(is, "input_biases", m.input_biases.data(), h);
  m.output_weights.resize(h);
  read_values(is, "output_weights", m.output_weights.data(), h);
  m.output_bias = read_num(is, "output_bias");
  return m;
}

void save_model_file(const NarxModel& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  save_model(m, os);
}

NarxModel load_model_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return load_model(is);
}

void save_training_set(const TrainingSet& data, std::ostream& os) {
  os << kDatasetHeader << '\n';
  os << "train_frac " << full_num(data.train_frac) << '\n';
  os << "val_frac " << full_num(data.val_frac) << '\n';
  os << "test_frac " << full_num(data.test_frac) << '\n';
  os << "sequences " << data.sequences.size() << '\n';
  for (std::size_t i = 0; i < data.sequences.size(); ++i) {
    const Sequence& s = data.sequences[i];
    os << "sequence " << i << " load " << full_num(s.load) << " su "
       << s.su_index << " len " << s.y.size() << '\n';
    write_vector_line(os, "u1", s.u1.data(), static_cast<int>(s.u1.size()));
    write_vector_line(os, "u2", s.u2.data(), static_cast<int>(s.u2.size()));
    write_vector_line(os, "y", s.y.data(), static_cast<int>(s.y.size()));
  }
}

TrainingSet load_training_set(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != kDatasetHeader)
    throw std::runtime_error("not a recognized dataset document");
  TrainingSet data;
  data.train_frac = read_num(is, "train_frac");
  data.val_frac = read_num(is, "val_frac");
  data.test_frac = read_num(is, "test_frac");
  int n = static_cast<int>(read_num(is, "sequences"));
  data.sequences.resize(n);
  for (int i = 0; i < n; ++i) {
    auto ls = expect_key(is, "sequence");
    int idx, len;
    std::string tok1, tok2, tok3;
    Sequence& s = data.sequences[i];
    if (!(ls >> idx >> tok1 >> s.load >> tok2 >> s.su_index >> tok3 >> len) ||
        idx != i || tok1 != "load" || tok2 != "su" || tok3 != "len")
      throw std::runtime_error("dataset: bad sequence record");
    s.u1.resize(len);
    s.u2.resize(len);
    s.y.resize(len);
    read_values(is, "u1", s.u1.data(), len);
    read_values(is, "u2", s.u2.data(), len);
    read_values(is, "y", s.y.data(), len);
  }
  return data;
}

void save_training_set_file(const TrainingSet& data, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  save_training_set(data, os);
}

TrainingSet load_training_set_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return load_training_set(is);
}

}  // namespace dsa
