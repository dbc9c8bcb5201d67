#include "dsa/cli.hpp"

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsa/experiments.hpp"
#include "dsa/narx.hpp"
#include "dsa/util.hpp"

namespace dsa::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

// Distinguishes "the invocation was wrong" (exit 1, nothing written) from a
// failure while producing artifacts (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SimConfig resolve_config(const CommonOptions& opt) {
  try {
    SimConfig cfg = opt.config_path.empty() ? default_config()
                                            : load_config_file(opt.config_path);
    if (opt.seed) cfg.experiment.master_seed = *opt.seed;
    if (opt.jobs) cfg.experiment.jobs = *opt.jobs;
    cfg.validate();
    return cfg;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// The manifest lands in the output directory before any artifact so a partial
// run is still attributable; it is finalized with the end timestamp (and any
// command-specific extras) once the artifacts are on disk.
class Manifest {
 public:
  Manifest(const std::string& command, const CommonOptions& opt,
           const SimConfig& cfg)
      : path_(fs::path(opt.out_dir) / "manifest.json") {
    doc_["command"] = command;
    doc_["config_path"] = opt.config_path;
    doc_["config"] = json::parse(config_to_json(cfg));
    doc_["master_seed"] = cfg.experiment.master_seed;
    doc_["tool_version"] = kToolVersion;
    doc_["output_dir"] = opt.out_dir;
    doc_["started_at"] = iso_timestamp();
    write();
  }

  json& extras() { return doc_; }

  void finish() {
    doc_["finished_at"] = iso_timestamp();
    write();
  }

 private:
  void write() const {
    std::ofstream os(path_);
    if (!os) throw std::runtime_error("cannot write " + path_.string());
    os << doc_.dump(2) << '\n';
  }

  fs::path path_;
  json doc_;
};

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + out_dir +
                             ": " + ec.message());
}

void write_text_file(const fs::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << body;
}

template <typename Rows, typename Writer>
void write_csv_file(const fs::path& path, const Rows& rows, Writer writer) {
  std::ostringstream buf;
  writer(rows, buf);
  write_text_file(path, buf.str());
}

int cmd_noise_sweep(const CommonOptions& opt) {
  SimConfig cfg = resolve_config(opt);
  ensure_out_dir(opt.out_dir);
  Manifest manifest("noise-sweep", opt, cfg);
  std::vector<NoiseSweepRow> rows = run_noise_sweep(cfg);
  write_csv_file(fs::path(opt.out_dir) / "noise_sweep.csv", rows,
                 write_noise_sweep_csv);
  manifest.finish();
  std::cout << "noise-sweep: " << rows.size() << " rows -> " << opt.out_dir
            << "/noise_sweep.csv\n";
  return 0;
}

int cmd_gen_data(const CommonOptions& opt) {
  SimConfig cfg = resolve_config(opt);
  ensure_out_dir(opt.out_dir);
  Manifest manifest("gen-data", opt, cfg);
  TrainingSet data = generate_training_data(cfg);
  save_training_set_file(data,
                         (fs::path(opt.out_dir) / "dataset.txt").string());
  manifest.extras()["sequences"] = data.sequences.size();
  manifest.extras()["usable_samples"] = total_samples(data, cfg.narx);
  manifest.finish();
  std::cout << "gen-data: " << data.sequences.size() << " sequences, "
            << total_samples(data, cfg.narx) << " usable samples -> "
            << opt.out_dir << "/dataset.txt\n";
  return 0;
}

void write_training_log(const fs::path& path, const TrainResult& result) {
  std::ostringstream os;
  os << "epoch,train_mse,val_mse,lambda,accepted\n";
  for (const EpochRecord& r : result.history)
    os << r.epoch << ',' << csv_num(r.train_mse) << ',' << csv_num(r.val_mse)
       << ',' << csv_num(r.lambda) << ',' << (r.accepted ? 1 : 0) << '\n';
  write_text_file(path, os.str());
}

int cmd_train(const CommonOptions& opt, const std::string& data_path) {
  SimConfig cfg = resolve_config(opt);
  ensure_out_dir(opt.out_dir);
  Manifest manifest("train", opt, cfg);

  TrainingSet data = data_path.empty() ? generate_training_data(cfg)
                                       : load_training_set_file(data_path);
  const int usable = total_samples(data, cfg.narx);
  if (usable < cfg.narx.regressor_length())
    throw std::runtime_error("dataset too small for the delay warmup");

  // Levenberg-Marquardt lands in different local minima per init, so run a
  // few independent starts and keep the one with the best validation MSE.
  TrainResult result;
  int chosen_start = 0;
  for (int i = 0; i < cfg.experiment.train_restarts; ++i) {
    NarxModel start =
        init_model(cfg.narx, substream(cfg.experiment.master_seed, "narx-init",
                                       static_cast<std::uint64_t>(i)));
    TrainResult candidate = train_lm(start, data);
    std::cout << "train: start " << i << " validation mse "
              << format_sig(candidate.best_val_mse, 6) << " at epoch "
              << candidate.best_epoch << "\n";
    if (i == 0 || candidate.best_val_mse < result.best_val_mse) {
      result = std::move(candidate);
      chosen_start = i;
    }
  }
  save_model_file(result.model, (fs::path(opt.out_dir) / "model.txt").string());
  write_training_log(fs::path(opt.out_dir) / "training_log.csv", result);

  manifest.extras()["usable_samples"] = usable;
  manifest.extras()["best_epoch"] = result.best_epoch;
  manifest.extras()["best_val_mse"] = result.best_val_mse;
  manifest.extras()["chosen_start"] = chosen_start;
  manifest.extras()["aborted_on_rejections"] = result.aborted_on_rejections;
  manifest.finish();
  std::cout << "train: best validation mse " << format_sig(result.best_val_mse, 6)
            << " at epoch " << result.best_epoch << " (start " << chosen_start
            << ") -> " << opt.out_dir << "/model.txt\n";
  return 0;
}

int cmd_evaluate(const CommonOptions& opt, const std::string& model_path,
                 const std::string& data_path) {
  SimConfig cfg = resolve_config(opt);

  bool needs_model = false;
  for (Policy p : cfg.experiment.policies)
    if (p == Policy::kNnNoModChange || p == Policy::kNnRelChange2 ||
        p == Policy::kNnRelChange5 || p == Policy::kNnRelChange10)
      needs_model = true;
  if (needs_model && model_path.empty())
    throw UsageError(
        "--model is required because prediction-driven policies are configured");

  ensure_out_dir(opt.out_dir);
  Manifest manifest("evaluate", opt, cfg);

  std::optional<NarxModel> model;
  if (!model_path.empty()) model = load_model_file(model_path);

  std::vector<NoiseSweepRow> sweep = run_noise_sweep(cfg);
  write_csv_file(fs::path(opt.out_dir) / "noise_sweep.csv", sweep,
                 write_noise_sweep_csv);

  McResult mc = run_monte_carlo(cfg, model ? &*model : nullptr);
  write_csv_file(fs::path(opt.out_dir) / "monte_carlo.csv", mc.rows,
                 write_monte_carlo_csv);
  write_csv_file(fs::path(opt.out_dir) / "sn_cdf.csv", sn_throughput_cdf(mc),
                 write_sn_cdf_csv);

  std::vector<HistRow> hist;
  if (model) {
    TrainingSet data = data_path.empty() ? generate_training_data(cfg)
                                         : load_training_set_file(data_path);
    hist = cqi_error_histogram(*model, data, cfg);
  }
  write_csv_file(fs::path(opt.out_dir) / "cqi_hist.csv", hist,
                 write_cqi_hist_csv);

  manifest.extras()["monte_carlo_rows"] = mc.rows.size();
  manifest.finish();
  std::cout << "evaluate: " << mc.rows.size() << " measurement rows -> "
            << opt.out_dir << '\n';
  return 0;
}

void add_common(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("--config", opt.config_path, "Configuration file (JSON)")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", opt.out_dir, "Output directory");
  sub->add_option("--seed", opt.seed, "Override the master seed");
  sub->add_option("--jobs", opt.jobs, "Worker threads (0 = machine parallelism)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Underlay spectrum-sharing simulator"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonOptions noise_opt, gen_opt, train_opt, eval_opt;
  std::string train_data, eval_model, eval_data;

  CLI::App* noise = app.add_subcommand(
      "noise-sweep", "Primary-network throughput across noise levels");
  add_common(noise, noise_opt);

  CLI::App* gen = app.add_subcommand(
      "gen-data", "Generate controller-trace training sequences");
  add_common(gen, gen_opt);

  CLI::App* train = app.add_subcommand(
      "train", "Train the throughput predictor");
  add_common(train, train_opt);
  train->add_option("--data", train_data,
                    "Existing dataset file (default: regenerate from config)")
      ->check(CLI::ExistingFile);

  CLI::App* eval = app.add_subcommand(
      "evaluate", "Monte Carlo policy comparison and metric export");
  add_common(eval, eval_opt);
  eval->add_option("--model", eval_model, "Trained model file")
      ->check(CLI::ExistingFile);
  eval->add_option("--data", eval_data,
                   "Existing dataset file (default: regenerate from config)")
      ->check(CLI::ExistingFile);

  // CLI11 wants argc/argv order; it reparses from a joined vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (noise->parsed()) return cmd_noise_sweep(noise_opt);
    if (gen->parsed()) return cmd_gen_data(gen_opt);
    if (train->parsed()) return cmd_train(train_opt, train_data);
    if (eval->parsed()) return cmd_evaluate(eval_opt, eval_model, eval_data);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace dsa::cli
