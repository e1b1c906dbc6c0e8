#pragma once

#include "denseam/gradients.hpp"

namespace denseam {

// Adam moment buffers for all three parameter groups, zero-initialized.
struct AdamState {
  Matrix mW, vW;  // K x N
  Vector mB, vB;  // K
  Vector mC, vC;  // N
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState zeros_like(const ModelState& model);
};

// The raw updates applied in one Adam step, kept for diagnostics.
struct AdamUpdate {
  Matrix uW;
  Vector uB, uC;
};

// W <- W - etaW * gradW (and likewise for b, c).
void sgd_step(ModelState& model, const LossGradients& grads,
              const LearningRates& lr);

// One Adam step with bias correction: U = -eta * Mhat / (sqrt(Vhat) + eps)
// entrywise. By default the raw update is applied to W and the centering in
// the forward map makes the network see C U; with project_update the update
// itself is projected by C before being applied (diagnostic mode).
AdamUpdate adam_step(ModelState& model, const LossGradients& grads,
                     AdamState& state, const LearningRates& lr,
                     bool project_update = false);

}  // namespace denseam
