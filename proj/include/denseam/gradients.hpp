#pragma once

#include "denseam/model.hpp"

namespace denseam {

struct LearningRates {
  double etaW = 0.0;
  double etaB = 0.0;
  double etaC = 0.0;
};

// Analytic gradients of the denoising MSE. gradW splits into the
// outer-occurrence term (s2/B) S R^T and the hidden-occurrence term
// (s1 s2 / B) (S' . (W R)) G^T; for softmax the elementwise S' pattern is
// replaced by the exact per-sample Jacobian contraction
// J v = beta (sigma . v - (sigma^T v) sigma), never materializing J.
// For centered models every term is left-projected by C, so gradW columns
// have zero mean (projected gradient descent on the column-centered
// subspace).
struct LossGradients {
  Matrix gradW;   // K x N, = gradW1 + gradW2
  Matrix gradW1;  // outer occurrence
  Matrix gradW2;  // hidden occurrence
  Vector gradB;   // K
  Vector gradC;   // N
};

LossGradients loss_gradients(const ModelState& model,
                             const BatchTensors& batch);

// First-order decomposition of one SGD step: the two weight terms, their
// effect on preactivations (dZl = s1 * dWl * G) and the four output terms
// dF(route, source) where route 1 is the outer readout and route 2 the
// hidden-feature path.
struct UpdateDecomposition {
  Matrix dW1, dW2;                  // K x N
  Matrix dZ1, dZ2;                  // K x B
  Matrix dF11, dF12, dF21, dF22;    // N x B
  Vector dB;                        // K
  Vector dC;                        // N
};

UpdateDecomposition sgd_update_decomposition(const ModelState& model,
                                             const BatchTensors& batch,
                                             const LearningRates& lr);

// Row average over hidden units: Ubar_i = (1/K) sum_k U_{ki}.
Vector adam_row_mean(const Matrix& update);

// Per-entry root-mean-square, ||m||_F / sqrt(entry count).
double rms(const Matrix& m);
double rms(const Vector& v);

}  // namespace denseam
