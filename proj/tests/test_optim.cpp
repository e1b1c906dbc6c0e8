#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "denseam/optim.hpp"

using namespace denseam;

namespace {

LossGradients zero_grads(const ModelState& m) {
  LossGradients g;
  g.gradW = Matrix::Zero(m.k(), m.n());
  g.gradW1 = g.gradW;
  g.gradW2 = g.gradW;
  g.gradB = Vector::Zero(m.k());
  g.gradC = Vector::Zero(m.n());
  return g;
}

ModelState small_model(Rng& rng, bool centered = false) {
  return init_model(rng, 6, 4, ActivationKind::relu(1), 0.5, 0.6, centered);
}

}  // namespace

TEST_CASE("sgd with zero gradients leaves the model unchanged") {
  Rng rng(51);
  ModelState m = small_model(rng);
  const Matrix w0 = m.W;
  sgd_step(m, zero_grads(m), LearningRates{1.0, 1.0, 1.0});
  CHECK((m.W - w0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sgd decrements exactly by eta * grad") {
  Rng rng(52);
  ModelState m = small_model(rng);
  LossGradients g = zero_grads(m);
  g.gradW.block(0, 0, 4, 4) = Matrix::Identity(4, 4);
  const Matrix w0 = m.W;
  sgd_step(m, g, LearningRates{1.0, 0, 0});
  CHECK((w0 - m.W - g.gradW).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("one sgd step reproduces the dZ decomposition exactly") {
  Rng rng(53);
  for (bool centered : {false, true}) {
    ModelState m = init_model(rng, 7, 5, ActivationKind::linear(), 0.5, 0.7,
                              centered);
    const Matrix x = sample_gaussian(rng, 5, 4, 1.0);
    const BatchTensors before = forward(m, x);
    const LearningRates lr{0.01, 0.02, 0.0};
    const UpdateDecomposition d = sgd_update_decomposition(m, before, lr);
    const LossGradients g = loss_gradients(m, before);
    sgd_step(m, g, lr);
    const BatchTensors after = forward(m, x);
    const Matrix dz_from_bias =
        (m.centered ? Vector(center(d.dB)) : d.dB) *
        Eigen::RowVectorXd::Ones(4);
    const Matrix dz_total = d.dZ1 + d.dZ2 + dz_from_bias;
    CHECK((after.Z - before.Z - dz_total).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("adam first-step update has magnitude ~ eta for a constant gradient") {
  Rng rng(54);
  ModelState m = small_model(rng);
  AdamState state = AdamState::zeros_like(m);
  LossGradients g = zero_grads(m);
  g.gradW = Matrix::Constant(m.k(), m.n(), 0.37);
  const double eta = 0.05;
  const AdamUpdate u =
      adam_step(m, g, state, LearningRates{eta, 0, 0});
  // First step: U = -eta * g / (|g| + eps'), so |U| is within eps-effects
  // of eta.
  CHECK(u.uW.cwiseAbs().maxCoeff() == doctest::Approx(eta).epsilon(1e-5));
  CHECK(u.uW(0, 0) < 0);  // opposes the gradient
  CHECK(state.t == 1);
}

TEST_CASE("adam never moves under identically zero gradients") {
  Rng rng(55);
  ModelState m = small_model(rng);
  const Matrix w0 = m.W;
  AdamState state = AdamState::zeros_like(m);
  for (int step = 0; step < 20; ++step) {
    adam_step(m, zero_grads(m), state, LearningRates{0.1, 0.1, 0.1});
  }
  CHECK((m.W - w0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adam updates stay at the sign-approximation scale over 100 steps") {
  Rng rng(56);
  ModelState m = init_model(rng, 8, 6, ActivationKind::relu(1), 1.0 / std::sqrt(6.0),
                            1.0 / std::sqrt(8.0), true);
  AdamState state = AdamState::zeros_like(m);
  const double eta = 0.01;
  Rng data_rng(57);
  double max_ratio = 0;
  double sum_rms = 0;
  for (int step = 0; step < 100; ++step) {
    const Matrix x = sample_gaussian(data_rng, 6, 5, 1.0);
    const LossGradients g = loss_gradients(m, forward(m, x));
    const AdamUpdate u =
        adam_step(m, g, state, LearningRates{eta, eta, eta});
    max_ratio = std::max(max_ratio, u.uW.cwiseAbs().maxCoeff() / eta);
    sum_rms += rms(u.uW) / eta;
  }
  // |Mhat/sqrt(Vhat)| ~ 1 per the sign approximation. The literal bound
  // |U| <= eta is only approximate: bias-corrected Adam overshoots it by a
  // few percent when the gradient magnitude grows between steps, so the
  // check allows that documented slack while pinning the typical scale.
  CHECK(max_ratio <= 1.5);
  CHECK(sum_rms / 100.0 > 0.5);
  CHECK(sum_rms / 100.0 <= 1.0);
}

TEST_CASE("adam is invariant under gradient rescaling") {
  for (double c0 : {10.0, 1000.0}) {
    Rng rng(58);
    ModelState m1 = small_model(rng);
    ModelState m2 = m1;
    AdamState s1 = AdamState::zeros_like(m1);
    AdamState s2 = AdamState::zeros_like(m2);
    Rng data_rng(59);
    double max_dev = 0;
    for (int step = 0; step < 20; ++step) {
      const Matrix x = sample_gaussian(data_rng, 4, 3, 1.0);
      const LossGradients g = loss_gradients(m1, forward(m1, x));
      LossGradients scaled = g;
      scaled.gradW *= c0;
      scaled.gradB *= c0;
      scaled.gradC *= c0;
      adam_step(m1, g, s1, LearningRates{0.01, 0.01, 0.01});
      adam_step(m2, scaled, s2, LearningRates{0.01, 0.01, 0.01});
      max_dev = std::max(max_dev, (m1.W - m2.W).cwiseAbs().maxCoeff());
    }
    CHECK(max_dev < 1e-6);
  }
}

TEST_CASE("raw and projected adam updates are indistinguishable to a centered model") {
  Rng rng(60);
  ModelState raw = init_model(rng, 7, 5, ActivationKind::relu(1), 0.4, 0.5, true);
  ModelState projected = raw;
  AdamState sr = AdamState::zeros_like(raw);
  AdamState sp = AdamState::zeros_like(projected);
  Rng data_rng(61);
  for (int step = 0; step < 10; ++step) {
    const Matrix x = sample_gaussian(data_rng, 5, 4, 1.0);
    const LossGradients gr = loss_gradients(raw, forward(raw, x));
    const LossGradients gp = loss_gradients(projected, forward(projected, x));
    adam_step(raw, gr, sr, LearningRates{0.05, 0.05, 0.05}, false);
    adam_step(projected, gp, sp, LearningRates{0.05, 0.05, 0.05}, true);
    const Matrix x_probe = sample_gaussian(data_rng, 5, 2, 1.0);
    const Matrix f_raw = forward(raw, x_probe).F;
    const Matrix f_proj = forward(projected, x_probe).F;
    CHECK((f_raw - f_proj).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("adam defaults follow the experimental constants") {
  AdamState s;
  CHECK(s.beta1 == 0.9);
  CHECK(s.beta2 == 0.999);
  CHECK(s.eps == 1e-8);
  CHECK(s.t == 0);
}
