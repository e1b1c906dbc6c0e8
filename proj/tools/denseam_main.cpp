// Command-line front end: training runs, learning-rate sweeps, collapse
// overlays, the MNIST cross-scale denoising comparison, and the
// closed-form/Monte-Carlo oracle table.
//
// Exit codes: 0 success, 1 configuration error, 2 oracle tolerance breach,
// 3 I/O error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "denseam/emit.hpp"
#include "denseam/harness.hpp"
#include "denseam/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitTolerance = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool override_softmax_sgd = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
  auto* c = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "override the config seed list with one seed");
  cmd->add_option("--threads", opts.threads, "worker threads across sweep cells");
  cmd->add_flag("--override-softmax-sgd", opts.override_softmax_sgd,
                "allow the experimental softmax+SGD recipe");
}

denseam::ExperimentConfig resolve_config(const CommonOpts& opts) {
  denseam::ExperimentConfig config = denseam::load_config(opts.config_path);
  if (opts.seed) config.seeds = {*opts.seed};
  if (opts.threads) config.threads = *opts.threads;
  if (opts.override_softmax_sgd) config.softmax_sgd_override = true;
  if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
  if (config.data.kind == denseam::DataKind::mnist_plaquette &&
      config.data.mnist_dir.empty()) {
    if (const char* dir = std::getenv("DENSEAM_MNIST_DIR")) {
      config.data.mnist_dir = dir;
    }
  }
  config.validate();
  std::filesystem::create_directories(config.output_dir);
  return config;
}

std::string out_path(const denseam::ExperimentConfig& config,
                     const std::string& name) {
  return (std::filesystem::path(config.output_dir) / (config.id + "_" + name))
      .string();
}

int run_train(const CommonOpts& opts) {
  denseam::ExperimentConfig config = resolve_config(opts);
  if (config.scale_ladder.size() != 1 || config.eta0_grid.size() != 1 ||
      config.seeds.size() != 1) {
    std::cerr << "train: config must pin exactly one scale, one eta0 and one "
                 "seed (use `sweep` for grids)\n";
    return kExitConfig;
  }
  denseam::SweepResult result = denseam::lr_sweep(config);
  denseam::emit_csv(config, result, out_path(config, "cells.csv"));
  denseam::emit_summary_csv(config, result, out_path(config, "summary.csv"));
  const denseam::CellResult& cell = result.cells.front();
  std::printf("cell scale=%ld eta0=%.6g seed=%llu: %s, final mse %.6g\n",
              cell.scale, cell.eta0,
              static_cast<unsigned long long>(cell.seed),
              cell.diverged ? "DIVERGED" : "ok", cell.final_mse);
  return kExitOk;
}

int run_sweep(const CommonOpts& opts) {
  denseam::ExperimentConfig config = resolve_config(opts);
  denseam::SweepResult result = denseam::lr_sweep(config);
  denseam::emit_csv(config, result, out_path(config, "cells.csv"));
  denseam::emit_summary_csv(config, result, out_path(config, "summary.csv"));
  denseam::emit_transfer_svg(config, result, out_path(config, "transfer.svg"));
  for (const denseam::ScaleSummary& s : result.summaries) {
    std::string unstable;
    if (!std::isnan(s.min_unstable_eta0)) {
      unstable = "  first unstable eta0 = " +
                 denseam::format_full(s.min_unstable_eta0);
    }
    std::printf("scale %ld: argmin eta0 = %.6g (final mse %.6g)%s\n", s.scale,
                s.argmin_eta0, s.min_final_mse, unstable.c_str());
  }
  return kExitOk;
}

int run_collapse(const CommonOpts& opts, double eta0_flag, bool eta0_set) {
  denseam::ExperimentConfig config = resolve_config(opts);
  const double eta0 = eta0_set ? eta0_flag : config.eta0_grid.front();
  denseam::SweepResult result = denseam::collapse_experiment(config, eta0);
  denseam::emit_csv(config, result, out_path(config, "cells.csv"));
  denseam::emit_summary_csv(config, result, out_path(config, "summary.csv"));
  denseam::emit_trace_svg(config, result, out_path(config, "traces.svg"));
  std::printf("collapse at eta0=%.6g over %zu scales written to %s\n", eta0,
              config.scale_ladder.size(), config.output_dir.c_str());
  return kExitOk;
}

int run_denoise(const CommonOpts& opts, int block, int steps, long image) {
  denseam::ExperimentConfig config = resolve_config(opts);
  denseam::DenoiseComparison cmp =
      denseam::denoise_compare(config, block, steps, image);
  const std::string prefix =
      (std::filesystem::path(config.output_dir) / (config.id + "_")).string();
  denseam::emit_denoise_report(cmp, prefix);
  std::printf("block=%d steps=%d image=%ld per-pixel rms difference %.6g\n",
              block, steps, image, cmp.per_pixel_rms);
  return kExitOk;
}

int run_oracle_check(std::uint64_t seed) {
  const auto checks = denseam::run_oracle_checks(seed);
  bool ok = true;
  std::printf("%-44s %14s %14s %9s %7s %s\n", "check", "predicted",
              "estimated", "rel.err", "tol", "status");
  for (const auto& c : checks) {
    ok = ok && c.pass;
    std::printf("%-44s %14.6g %14.6g %9.4f %7.3f %s\n", c.name.c_str(),
                c.predicted, c.estimated, c.relative_error, c.tolerance,
                c.pass ? "ok" : "FAIL");
  }
  return ok ? kExitOk : kExitTolerance;
}

int run_mnist_prep(const std::string& dir_flag, int block,
                   const std::string& out_dir) {
  std::string dir = dir_flag;
  if (dir.empty()) {
    if (const char* env = std::getenv("DENSEAM_MNIST_DIR")) dir = env;
  }
  if (dir.empty()) dir = ".";
  const std::string images = dir + "/" + denseam::kMnistImagesFile;
  if (!std::filesystem::exists(images)) {
    std::cerr << images << " not found.\n"
              << "Download and gunzip the IDX files into that directory:\n"
              << "  " << denseam::kMnistCanonicalUrls[0] << "\n"
              << "  " << denseam::kMnistCanonicalUrls[1] << "\n"
              << "(this tool never downloads anything itself)\n";
    return kExitIo;
  }
  const denseam::MnistImages mnist = denseam::load_mnist_idx(images);
  std::printf("%s: %ld images of %ldx%ld\n", images.c_str(), mnist.count,
              mnist.rows, mnist.cols);
  const long nj = denseam::plaquette_dim(block);
  std::printf("block %d -> input dimension %ld\n", block, nj);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/mnist_block" + std::to_string(block) +
                             "_preview.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "image,pixel,value\n";
    const long preview = std::min<long>(mnist.count, 16);
    for (long img = 0; img < preview; ++img) {
      const denseam::Vector v =
          denseam::plaquette_downsample(mnist.pixels.col(img), block);
      for (long p = 0; p < v.size(); ++p) {
        out << img << ',' << p << ',' << denseam::format_full(v[p]) << "\n";
      }
    }
    std::printf("wrote %s\n", path.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shallow tied-weight associative memory laboratory"};
  app.require_subcommand(1);

  CommonOpts train_opts, sweep_opts, collapse_opts, denoise_opts;
  double collapse_eta0 = 0;
  int denoise_block = 2, denoise_steps = 200;
  long denoise_image = 0;
  std::uint64_t oracle_seed = 7;
  std::string prep_dir, prep_out;
  int prep_block = 2;

  auto* train = app.add_subcommand("train", "train one (scale, eta0, seed) cell");
  add_common(train, train_opts);
  auto* sweep = app.add_subcommand("sweep", "learning-rate sweep across the scale ladder");
  add_common(sweep, sweep_opts);
  auto* collapse = app.add_subcommand("collapse", "fixed-eta0 traces across scales");
  add_common(collapse, collapse_opts);
  auto* collapse_eta_opt =
      collapse->add_option("--eta0", collapse_eta0, "effective learning rate");
  auto* denoise =
      app.add_subcommand("denoise-compare", "cross-scale MNIST denoising comparison");
  add_common(denoise, denoise_opts);
  denoise->add_option("--block", denoise_block, "plaquette block size j");
  denoise->add_option("--steps", denoise_steps, "dynamics steps");
  denoise->add_option("--image-index", denoise_image, "probe image index");
  auto* oracle = app.add_subcommand(
      "oracle-check", "closed-form vs Monte-Carlo moment predictions");
  oracle->add_option("--seed", oracle_seed, "seed for the estimators");
  auto* prep = app.add_subcommand("mnist-prep", "validate local MNIST IDX files");
  prep->add_option("--mnist-dir", prep_dir, "directory with the IDX files");
  prep->add_option("--block", prep_block, "plaquette block size j");
  prep->add_option("--out", prep_out, "write a downsampled preview here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (train->parsed()) return run_train(train_opts);
    if (sweep->parsed()) return run_sweep(sweep_opts);
    if (collapse->parsed()) {
      return run_collapse(collapse_opts, collapse_eta0,
                          collapse_eta_opt->count() > 0);
    }
    if (denoise->parsed()) {
      return run_denoise(denoise_opts, denoise_block, denoise_steps,
                         denoise_image);
    }
    if (oracle->parsed()) return run_oracle_check(oracle_seed);
    if (prep->parsed()) return run_mnist_prep(prep_dir, prep_block, prep_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}
