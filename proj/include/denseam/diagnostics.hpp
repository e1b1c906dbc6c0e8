#pragma once

#include "denseam/gradients.hpp"

namespace denseam {

// Top two eigenvalues of (1/K) S^T S, computed on the B x B side (the
// nonzero spectra of both Gram matrices coincide and B <= K in every regime
// of interest). Pass the centered activations to probe the bulk.
std::pair<double, double> gram_spike_bulk(const Matrix& s);

// Participation ratio K_eff = 1 / sum_k sigma_k^2 of one softmax column.
double participation_ratio(const Vector& sigma);

// Centered analog 1 / ||C sigma||^2 = K K_eff / (K - K_eff). A perfectly
// uniform column has ||C sigma|| = 0 and reports +infinity.
double participation_ratio_centered(const Vector& sigma);

// Everything the theory watches during one training step. Fields that do
// not apply to the current cell (K_eff for elementwise activations, Adam
// statistics under SGD) are NaN and the CSV writer emits them as empty.
struct DiagnosticsRecord {
  long epoch = 0;
  double mse = 0;              // (1/2B)||R||_F^2
  double mse_per_dim = 0;      // mse / N, comparable across scales
  double lambda_max = 0;       // of the network-visible Gram (S or CS) / K
  double lambda2 = 0;
  double lambda_max_raw = 0;   // unnormalized S^T S eigenvalues
  double lambda2_raw = 0;
  double k_eff = std::numeric_limits<double>::quiet_NaN();
  double k_eff_centered = std::numeric_limits<double>::quiet_NaN();
  double rms_z = 0, rms_f = 0;
  double rms_dw1 = 0, rms_dw2 = 0;
  double rms_dz1 = 0, rms_dz2 = 0;
  double rms_df11 = 0, rms_df12 = 0, rms_df21 = 0, rms_df22 = 0;
  double rms_db = 0, rms_dc = 0;
  double adam_update_rms = std::numeric_limits<double>::quiet_NaN();
  double adam_row_mean_rms = std::numeric_limits<double>::quiet_NaN();
  bool diverged = false;
};

// Fills the desiderata magnitudes (per-entry RMS of Z, F and of every
// decomposition term), the spike/bulk eigenvalues of the network-visible
// Gram matrix, and for softmax the batch-mean participation ratios.
DiagnosticsRecord desiderata_probe(const ModelState& model,
                                   const BatchTensors& batch,
                                   const UpdateDecomposition& decomposition);

}  // namespace denseam
