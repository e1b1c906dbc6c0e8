#include "denseam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace denseam {

namespace {

using nlohmann::json;

constexpr long kMnistTrainCount = 60000;

ActivationKind activation_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "linear") return ActivationKind::linear();
  if (type == "relu") return ActivationKind::relu(j.value("p", 1));
  if (type == "softmax") return ActivationKind::softmax(j.value("beta", 1.0));
  throw std::invalid_argument("config: unknown activation type '" + type + "'");
}

json activation_to_json(const ActivationKind& act) {
  json j;
  j["type"] = act.name();
  if (act.type == ActivationType::relu_p) j["p"] = act.p;
  if (act.type == ActivationType::softmax) j["beta"] = act.beta;
  return j;
}

ScalingRegime regime_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "proportional") {
    return ScalingRegime::proportional(j.at("kappa").get<double>(),
                                       j.at("rho").get<double>(),
                                       j.at("beta").get<double>());
  }
  if (kind == "k_only") {
    return ScalingRegime::k_only(j.at("n").get<long>(), j.at("p").get<long>(),
                                 j.at("beta").get<double>());
  }
  throw std::invalid_argument("config: unknown regime kind '" + kind + "'");
}

json regime_to_json(const ScalingRegime& r) {
  json j;
  if (r.kind == RegimeKind::proportional) {
    j["kind"] = "proportional";
    j["kappa"] = r.kappa;
    j["rho"] = r.rho;
    j["beta"] = r.beta;
  } else {
    j["kind"] = "k_only";
    j["n"] = r.n_fixed;
    j["p"] = r.p_fixed;
    j["beta"] = r.beta;
  }
  return j;
}

DataSpec data_from_json(const json& j) {
  DataSpec spec;
  const std::string kind = j.value("kind", std::string("isotropic"));
  if (kind == "isotropic") {
    spec.kind = DataKind::isotropic;
  } else if (kind == "anisotropic_power_law") {
    spec.kind = DataKind::anisotropic_power_law;
    spec.exponent = j.value("exponent", 0.4);
  } else if (kind == "mnist_plaquette") {
    spec.kind = DataKind::mnist_plaquette;
    spec.mnist_dir = j.value("mnist_dir", std::string());
  } else {
    throw std::invalid_argument("config: unknown data kind '" + kind + "'");
  }
  spec.noise_std = j.value("noise_std", 0.3);
  return spec;
}

json data_to_json(const DataSpec& spec) {
  json j;
  switch (spec.kind) {
    case DataKind::isotropic: j["kind"] = "isotropic"; break;
    case DataKind::anisotropic_power_law:
      j["kind"] = "anisotropic_power_law";
      j["exponent"] = spec.exponent;
      break;
    case DataKind::mnist_plaquette:
      j["kind"] = "mnist_plaquette";
      j["mnist_dir"] = spec.mnist_dir;
      break;
  }
  j["noise_std"] = spec.noise_std;
  return j;
}

std::vector<double> grid_from_json(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) {
    const int lo = j.at("log2_min").get<int>();
    const int hi = j.at("log2_max").get<int>();
    if (hi < lo) throw std::invalid_argument("config: log2_max < log2_min");
    std::vector<double> grid;
    for (int e = lo; e <= hi; ++e) grid.push_back(std::ldexp(1.0, e));
    return grid;
  }
  throw std::invalid_argument("config: eta0_grid must be an array or a log2 range");
}

// Deterministic Fisher-Yates shuffle.
void shuffle_indices(std::vector<long>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j =
        static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

std::uint64_t eta_key(double eta0) {
  std::uint64_t bits;
  static_assert(sizeof bits == sizeof eta0);
  std::memcpy(&bits, &eta0, sizeof bits);
  return bits;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (scale_ladder.empty()) {
    throw std::invalid_argument("config: scale_ladder must not be empty");
  }
  if (eta0_grid.empty()) {
    throw std::invalid_argument("config: eta0_grid must not be empty");
  }
  if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("config: seeds must not be empty");
  if (diagnostics_every < 0) {
    throw std::invalid_argument("config: diagnostics_every must be >= 0");
  }
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (data.kind == DataKind::mnist_plaquette) {
    for (long j : scale_ladder) plaquette_dim(static_cast<int>(j));
    if (regime.kind != RegimeKind::proportional) {
      throw std::invalid_argument(
          "config: mnist experiments use the proportional regime with block "
          "sizes as the scale ladder");
    }
  }
  // Fail fast if the (activation, optimizer) cell has no prescription.
  scaling_rule(regime, activation, optimizer, softmax_sgd_override);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  const std::string schema = j.value("schema", std::string("denseam-config/1"));
  if (schema != "denseam-config/1") {
    throw std::invalid_argument(path + ": unsupported schema '" + schema + "'");
  }
  ExperimentConfig c;
  c.id = j.value("id", std::string("experiment"));
  c.regime = regime_from_json(j.at("regime"));
  c.activation = activation_from_json(j.at("activation"));
  const std::string opt = j.value("optimizer", std::string("sgd"));
  if (opt == "sgd") {
    c.optimizer = OptimizerKind::sgd;
  } else if (opt == "adam") {
    c.optimizer = OptimizerKind::adam;
  } else {
    throw std::invalid_argument("config: unknown optimizer '" + opt + "'");
  }
  if (j.contains("data")) c.data = data_from_json(j.at("data"));
  c.scale_ladder = j.at("scale_ladder").get<std::vector<long>>();
  c.eta0_grid = grid_from_json(j.at("eta0_grid"));
  c.epochs = j.value("epochs", 64L);
  if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.diagnostics_every = j.value("diagnostics_every", 1L);
  c.trainable_biases = j.value("trainable_biases", true);
  const std::string bias_init = j.value("bias_init", std::string("zero"));
  if (bias_init == "zero") {
    c.bias_init = BiasInit::zero;
  } else if (bias_init == "gaussian") {
    c.bias_init = BiasInit::standard_gaussian;
  } else {
    throw std::invalid_argument("config: unknown bias_init '" + bias_init + "'");
  }
  c.centered = j.value("centered", true);
  c.softmax_sgd_override = j.value("softmax_sgd_override", false);
  c.eta_b0 = j.value("eta_b0", std::numeric_limits<double>::quiet_NaN());
  c.eta_c0 = j.value("eta_c0", std::numeric_limits<double>::quiet_NaN());
  c.s10 = j.value("s10", 1.0);
  c.s20 = j.value("s20", 1.0);
  c.output_dir = j.value("output_dir", std::string("."));
  c.threads = j.value("threads", 1);
  c.budget_cap_seconds = j.value("budget_cap_seconds", 0.0);
  // Semantic validation happens after callers apply their overrides (the
  // CLI may still toggle softmax_sgd_override or seeds).
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema"] = "denseam-config/1";
  j["id"] = c.id;
  j["regime"] = regime_to_json(c.regime);
  j["activation"] = activation_to_json(c.activation);
  j["optimizer"] = optimizer_name(c.optimizer);
  j["data"] = data_to_json(c.data);
  j["scale_ladder"] = c.scale_ladder;
  j["eta0_grid"] = c.eta0_grid;
  j["epochs"] = c.epochs;
  j["seeds"] = c.seeds;
  j["diagnostics_every"] = c.diagnostics_every;
  j["trainable_biases"] = c.trainable_biases;
  j["bias_init"] = c.bias_init == BiasInit::zero ? "zero" : "gaussian";
  j["centered"] = c.centered;
  j["softmax_sgd_override"] = c.softmax_sgd_override;
  if (!std::isnan(c.eta_b0)) j["eta_b0"] = c.eta_b0;
  if (!std::isnan(c.eta_c0)) j["eta_c0"] = c.eta_c0;
  j["s10"] = c.s10;
  j["s20"] = c.s20;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  if (c.budget_cap_seconds > 0) j["budget_cap_seconds"] = c.budget_cap_seconds;
  return j.dump(2);
}

long cell_input_dim(const ExperimentConfig& config, long scale) {
  if (config.data.kind == DataKind::mnist_plaquette) {
    return plaquette_dim(static_cast<int>(scale));
  }
  return scale;
}

Dims cell_dims(const ExperimentConfig& config, long scale) {
  Dims dims = dims_for(config.regime, cell_input_dim(config, scale));
  if (config.data.kind == DataKind::mnist_plaquette &&
      dims.p > kMnistTrainCount) {
    dims.p = kMnistTrainCount;  // rho clamped by the dataset size
    dims.b = std::min(dims.b, dims.p);
  }
  return dims;
}

CellResult train_cell(const ExperimentConfig& config, long scale, double eta0,
                      std::uint64_t seed) {
  return train_cell(config, scale, eta0, seed, nullptr);
}

CellResult train_cell(const ExperimentConfig& config, long scale, double eta0,
                      std::uint64_t seed, ModelState* final_model) {
  CellResult cell;
  cell.scale = scale;
  cell.eta0 = eta0;
  cell.seed = seed;
  cell.dims = cell_dims(config, scale);
  cell.presc = prescription(config.regime, config.activation, config.optimizer,
                            cell.dims, eta0, config.eta_b0, config.eta_c0,
                            config.softmax_sgd_override, config.s10,
                            config.s20);
  LearningRates lr{cell.presc.etaW, cell.presc.etaB, cell.presc.etaC};
  if (!config.trainable_biases) lr.etaB = lr.etaC = 0.0;

  const Rng root(seed);
  // The dataset and initialization streams depend on the scale but not on
  // eta0, so every grid point at one scale trains the same problem.
  Rng data_rng = root.split(hash_combine(1, static_cast<std::uint64_t>(scale)));
  Rng init_rng = root.split(hash_combine(2, static_cast<std::uint64_t>(scale)));
  Rng train_rng = root.split(
      hash_combine(3, static_cast<std::uint64_t>(scale), eta_key(eta0)));

  const DataSpec spec = config.data;
  const Dataset dataset = [&] {
    DataSpec s = spec;
    if (s.kind == DataKind::mnist_plaquette) s.block = static_cast<int>(scale);
    return generate(s, cell.dims, data_rng);
  }();

  ModelState model =
      init_model(init_rng, cell.dims.k, cell.dims.n, config.activation,
                 cell.presc.s1, cell.presc.s2, config.centered,
                 config.bias_init);
  AdamState adam = AdamState::zeros_like(model);

  std::vector<long> order(static_cast<std::size_t>(cell.dims.p));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<long>(i);

  cell.mse_trace.reserve(static_cast<std::size_t>(config.epochs));
  for (long epoch = 0; epoch < config.epochs && !cell.diverged; ++epoch) {
    shuffle_indices(order, train_rng);
    double epoch_residual = 0;
    const bool probe_epoch =
        config.diagnostics_every > 0 && epoch % config.diagnostics_every == 0;
    for (long start = 0; start < cell.dims.p; start += cell.dims.b) {
      const long stop = std::min(start + cell.dims.b, cell.dims.p);
      const std::span<const long> idx(order.data() + start,
                                      static_cast<std::size_t>(stop - start));
      auto [noisy, clean] = noisy_batch(dataset, idx, spec.noise_std, train_rng);
      const BatchTensors batch = forward(model, noisy, clean);
      const double batch_loss = mse_loss(batch.F, clean);
      if (!std::isfinite(batch_loss)) {
        cell.diverged = true;
        cell.diverged_epoch = epoch;
        // Capture what the hidden layer looked like when the cell blew up:
        // softmax stays finite under max-subtraction, so the participation
        // ratio remains informative even after the loss overflows.
        try {
          DiagnosticsRecord rec;
          rec.epoch = epoch;
          rec.diverged = true;
          rec.mse = batch_loss;
          rec.mse_per_dim = batch_loss / static_cast<double>(cell.dims.n);
          if (batch.S.allFinite() &&
              model.activation.type == ActivationType::softmax) {
            double keff = 0;
            for (Index mu = 0; mu < batch.S.cols(); ++mu) {
              keff += participation_ratio(batch.S.col(mu));
            }
            rec.k_eff = keff / static_cast<double>(batch.S.cols());
          }
          cell.diagnostics.push_back(rec);
        } catch (...) {
          // Diagnostics at a non-finite state are best effort.
        }
        break;
      }
      epoch_residual += batch_loss * static_cast<double>(stop - start);
      const LossGradients grads = loss_gradients(model, batch);
      if (probe_epoch && start == 0) {
        const UpdateDecomposition dec =
            sgd_update_decomposition(model, batch, lr);
        DiagnosticsRecord rec = desiderata_probe(model, batch, dec);
        rec.epoch = epoch;
        if (config.optimizer == OptimizerKind::adam) {
          // Peek at the update without disturbing the real step.
          ModelState probe_model = model;
          AdamState probe_adam = adam;
          const AdamUpdate u = adam_step(probe_model, grads, probe_adam, lr);
          rec.adam_update_rms = rms(u.uW);
          rec.adam_row_mean_rms = rms(Vector(adam_row_mean(u.uW)));
        }
        cell.diagnostics.push_back(std::move(rec));
      }
      if (config.optimizer == OptimizerKind::sgd) {
        sgd_step(model, grads, lr);
      } else {
        adam_step(model, grads, adam, lr);
      }
    }
    if (cell.diverged) break;
    const double epoch_mse = epoch_residual / static_cast<double>(cell.dims.p);
    cell.mse_trace.push_back(epoch_mse);
    cell.mse_per_dim_trace.push_back(epoch_mse /
                                     static_cast<double>(cell.dims.n));
  }
  if (cell.diverged) {
    cell.final_mse = std::numeric_limits<double>::infinity();
    if (!cell.diagnostics.empty()) cell.diagnostics.back().diverged = true;
  } else if (!cell.mse_trace.empty()) {
    cell.final_mse = cell.mse_trace.back();
  }
  if (final_model) *final_model = std::move(model);
  return cell;
}

std::vector<ScaleSummary> summarize(const ExperimentConfig& config,
                                    const std::vector<CellResult>& cells) {
  std::vector<ScaleSummary> out;
  std::vector<double> grid = config.eta0_grid;
  std::sort(grid.begin(), grid.end());
  for (long scale : config.scale_ladder) {
    ScaleSummary s;
    s.scale = scale;
    for (double eta0 : grid) {
      double mean_final = 0;
      double first_epoch = 0;
      long count = 0;
      bool unstable = false;
      for (const CellResult& cell : cells) {
        if (cell.scale != scale || cell.eta0 != eta0) continue;
        ++count;
        if (cell.diverged || !std::isfinite(cell.final_mse)) {
          unstable = true;
          mean_final = std::numeric_limits<double>::infinity();
          continue;
        }
        mean_final += cell.final_mse;
        first_epoch += cell.mse_trace.empty() ? 0.0 : cell.mse_trace.front();
      }
      if (count == 0) continue;
      if (std::isfinite(mean_final)) {
        mean_final /= static_cast<double>(count);
        first_epoch /= static_cast<double>(count);
        if (mean_final > 2.0 * first_epoch) unstable = true;
      }
      if (unstable && std::isnan(s.min_unstable_eta0)) {
        s.min_unstable_eta0 = eta0;
      }
      if (!std::isnan(mean_final) &&
          (std::isnan(s.min_final_mse) || mean_final < s.min_final_mse)) {
        s.min_final_mse = mean_final;
        s.argmin_eta0 = eta0;
      }
    }
    out.push_back(s);
  }
  return out;
}

double estimate_sweep_flops(const ExperimentConfig& config) {
  double total = 0;
  for (long scale : config.scale_ladder) {
    const Dims d = cell_dims(config, scale);
    const double steps =
        static_cast<double>(config.epochs) *
        static_cast<double>((d.p + d.b - 1) / d.b);
    // Four K x N x B products per training step (forward pair + gradient
    // pair), two flops per multiply-accumulate.
    const double per_step = 8.0 * static_cast<double>(d.k) *
                            static_cast<double>(d.n) * static_cast<double>(d.b);
    total += per_step * steps * static_cast<double>(config.eta0_grid.size()) *
             static_cast<double>(config.seeds.size());
  }
  return total;
}

double estimate_sweep_seconds(const ExperimentConfig& config) {
  // Desk-scale single-thread throughput; a coarse planning number, not a
  // benchmark.
  constexpr double kFlopsPerSecond = 5e9;
  return estimate_sweep_flops(config) /
         (kFlopsPerSecond * std::max(1, config.threads));
}

namespace {

SweepResult run_cells(const ExperimentConfig& config,
                      const std::vector<double>& grid) {
  config.validate();
  if (config.budget_cap_seconds > 0) {
    const double projected = estimate_sweep_seconds(config);
    if (projected > config.budget_cap_seconds) {
      std::fprintf(stderr,
                   "warning: projected sweep time %.0f s exceeds the "
                   "configured budget cap %.0f s\n",
                   projected, config.budget_cap_seconds);
    }
  }
  struct CellSpec {
    long scale;
    double eta0;
    std::uint64_t seed;
  };
  std::vector<CellSpec> specs;
  for (long scale : config.scale_ladder) {
    for (double eta0 : grid) {
      for (std::uint64_t seed : config.seeds) {
        specs.push_back({scale, eta0, seed});
      }
    }
  }
  std::vector<CellResult> cells(specs.size());
  const int workers = std::max(
      1, std::min<int>(config.threads, static_cast<int>(specs.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      cells[i] = train_cell(config, specs[i].scale, specs[i].eta0,
                            specs[i].seed);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < specs.size();
             i = next.fetch_add(1)) {
          cells[i] = train_cell(config, specs[i].scale, specs[i].eta0,
                                specs[i].seed);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  SweepResult result;
  result.cells = std::move(cells);
  ExperimentConfig grid_config = config;
  grid_config.eta0_grid = grid;
  result.summaries = summarize(grid_config, result.cells);
  return result;
}

}  // namespace

SweepResult lr_sweep(const ExperimentConfig& config) {
  return run_cells(config, config.eta0_grid);
}

SweepResult collapse_experiment(const ExperimentConfig& config, double eta0) {
  return run_cells(config, {eta0});
}

DenoiseComparison denoise_compare(const ExperimentConfig& config, int block,
                                  int steps, long image_index) {
  if (config.data.kind != DataKind::mnist_plaquette) {
    throw std::invalid_argument("denoise_compare requires mnist data");
  }
  if (steps < 1) throw std::invalid_argument("denoise_compare: steps must be >= 1");
  const std::string dir =
      config.data.mnist_dir.empty() ? "." : config.data.mnist_dir;
  const MnistImages mnist = load_mnist_idx(dir + "/" + kMnistImagesFile);
  if (image_index < 0 || image_index >= mnist.count) {
    throw std::invalid_argument("denoise_compare: image index out of range");
  }

  const double eta0 = config.eta0_grid.front();
  ExperimentConfig cfg = config;
  cfg.diagnostics_every = 0;

  ModelState full_model, small_model;
  train_cell(cfg, 1, eta0, cfg.seeds.front(), &full_model);
  train_cell(cfg, block, eta0, cfg.seeds.front(), &small_model);

  // Pixel means of the training images, needed to center the probe input
  // the same way the training data was centered.
  const auto pixel_means = [&](int j) {
    const Dims dims = cell_dims(cfg, j);
    Vector mean = Vector::Zero(plaquette_dim(j));
    for (long mu = 0; mu < dims.p; ++mu) {
      mean += plaquette_downsample(mnist.pixels.col(mu), j);
    }
    return Vector(mean / static_cast<double>(dims.p));
  };
  const Vector mean_full = pixel_means(1);
  const Vector mean_small = pixel_means(block);

  DenoiseComparison cmp;
  cmp.block = block;
  cmp.steps = steps;
  cmp.clean = mnist.pixels.col(image_index);
  Rng noise_rng = Rng(cfg.seeds.front()).split(hash_combine(17, 1));
  cmp.corrupted =
      cmp.clean +
      sample_gaussian_vector(noise_rng, 784, config.data.noise_std);

  const Vector x0_full = cmp.corrupted - mean_full;
  DynamicsTrace full_trace = run_dynamics(full_model, x0_full, 1.0, steps);
  cmp.full_denoised = full_trace.states.back() + mean_full;
  cmp.full_downsampled = plaquette_downsample(cmp.full_denoised, block);

  cmp.small_input = plaquette_downsample(cmp.corrupted, block);
  const Vector x0_small = cmp.small_input - mean_small;
  DynamicsTrace small_trace = run_dynamics(small_model, x0_small, 1.0, steps);
  cmp.small_denoised = small_trace.states.back() + mean_small;

  cmp.per_pixel_rms = rms(Vector(cmp.full_downsampled - cmp.small_denoised));
  return cmp;
}

}  // namespace denseam
