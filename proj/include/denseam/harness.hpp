#pragma once

#include <optional>
#include <string>
#include <vector>

#include "denseam/data.hpp"
#include "denseam/diagnostics.hpp"
#include "denseam/optim.hpp"
#include "denseam/parameterization.hpp"

namespace denseam {

// One experiment: a scale ladder crossed with a learning-rate grid and a
// seed list. For MNIST data the ladder entries are plaquette block sizes j
// (so N = ceil(28/j)^2); otherwise they are N (proportional regime) or K
// (K-only regime).
struct ExperimentConfig {
  std::string id = "experiment";
  ScalingRegime regime;
  ActivationKind activation = ActivationKind::linear();
  OptimizerKind optimizer = OptimizerKind::sgd;
  DataSpec data;
  std::vector<long> scale_ladder;
  std::vector<double> eta0_grid;
  long epochs = 64;
  std::vector<std::uint64_t> seeds{1};
  long diagnostics_every = 1;  // epochs between probes; 0 disables
  bool trainable_biases = true;
  // Experiments start biases at zero (see BiasInit); the Gaussian theory
  // convention is available for probing initialization statistics.
  BiasInit bias_init = BiasInit::zero;
  bool centered = true;
  bool softmax_sgd_override = false;
  double eta_b0 = std::numeric_limits<double>::quiet_NaN();  // NaN -> eta0
  double eta_c0 = std::numeric_limits<double>::quiet_NaN();
  double s10 = 1.0;
  double s20 = 1.0;
  std::string output_dir = ".";
  int threads = 1;
  // Warn before starting when the projected sweep time exceeds this many
  // seconds (0 disables the check).
  double budget_cap_seconds = 0.0;

  // Throws std::invalid_argument on an ill-formed experiment.
  void validate() const;
};

ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

// Resolves a ladder entry to model dimensions (handles the MNIST
// block-size convention and dataset-size clamping of P).
Dims cell_dims(const ExperimentConfig& config, long scale);
long cell_input_dim(const ExperimentConfig& config, long scale);

struct CellResult {
  long scale = 0;
  double eta0 = 0;
  std::uint64_t seed = 0;
  Dims dims;
  Prescription presc;
  std::vector<double> mse_trace;          // epoch-averaged training loss
  std::vector<double> mse_per_dim_trace;  // mse / N
  std::vector<DiagnosticsRecord> diagnostics;
  double final_mse = std::numeric_limits<double>::quiet_NaN();
  bool diverged = false;
  long diverged_epoch = -1;
};

// Trains one (scale, eta0, seed) cell. Deterministic: every random draw is
// taken from streams derived from (seed, scale, eta0), so identical inputs
// reproduce bit-identical traces. A non-finite loss halts the cell and
// marks it diverged.
CellResult train_cell(const ExperimentConfig& config, long scale, double eta0,
                      std::uint64_t seed);

// Returns the trained model as well (single-cell `train` subcommand).
CellResult train_cell(const ExperimentConfig& config, long scale, double eta0,
                      std::uint64_t seed, ModelState* final_model);

struct ScaleSummary {
  long scale = 0;
  double argmin_eta0 = std::numeric_limits<double>::quiet_NaN();
  double min_final_mse = std::numeric_limits<double>::quiet_NaN();
  // Smallest eta0 whose cells diverge or blow past 2x the first-epoch MSE;
  // NaN when every grid point is stable.
  double min_unstable_eta0 = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  std::vector<CellResult> cells;  // ordered by (scale, eta0, seed)
  std::vector<ScaleSummary> summaries;
};

// Trains every (scale, eta0, seed) cell, in parallel across cells when
// config.threads > 1. Individual divergences are recorded and the sweep
// continues.
SweepResult lr_sweep(const ExperimentConfig& config);

// Fixed-eta0 per-scale traces for the dynamical-collapse overlays.
SweepResult collapse_experiment(const ExperimentConfig& config, double eta0);

// Per-scale argmin of mean final MSE across seeds (diverged cells count as
// +infinity), plus the instability edge used by the centering studies.
std::vector<ScaleSummary> summarize(const ExperimentConfig& config,
                                    const std::vector<CellResult>& cells);

// Work estimate for the whole sweep: sum over cells of
// N * K * B * epochs * ceil(P/B) multiply-accumulates per forward/backward
// pass (times a small constant folded into the seconds conversion).
double estimate_sweep_flops(const ExperimentConfig& config);
double estimate_sweep_seconds(const ExperimentConfig& config);

struct DenoiseComparison {
  long block = 1;
  long steps = 0;
  Vector clean;             // original 784 image
  Vector corrupted;         // 784 noisy input
  Vector full_denoised;     // 784 endpoint of the full-size model
  Vector full_downsampled;  // D_j applied to the full-model endpoint
  Vector small_input;       // D_j applied to the corrupted image
  Vector small_denoised;    // endpoint of the downsampled-size model
  double per_pixel_rms = 0; // RMS difference of the two small endpoints
};

// Trains a full-size (N = 784) and a block-j DenseAM on MNIST, denoises one
// held-out image with `steps` dynamics steps, and compares the downsampled
// full-model endpoint with the small-model endpoint. Reported, not
// asserted: there is no numeric agreement threshold.
DenoiseComparison denoise_compare(const ExperimentConfig& config, int block,
                                  int steps, long image_index);

}  // namespace denseam
