#include "denseam/optim.hpp"

#include <cmath>

namespace denseam {
namespace {

template <typename T>
T adam_update(T& m, T& v, const T& grad, double eta, double beta1,
              double beta2, double eps, double bc1, double bc2) {
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  const T mhat = m / bc1;
  const T vhat = v / bc2;
  const T denom =
      vhat.cwiseSqrt() + T::Constant(grad.rows(), grad.cols(), eps);
  return (-eta) * mhat.cwiseQuotient(denom);
}

}  // namespace

AdamState AdamState::zeros_like(const ModelState& model) {
  AdamState s;
  s.mW = Matrix::Zero(model.k(), model.n());
  s.vW = Matrix::Zero(model.k(), model.n());
  s.mB = Vector::Zero(model.k());
  s.vB = Vector::Zero(model.k());
  s.mC = Vector::Zero(model.n());
  s.vC = Vector::Zero(model.n());
  return s;
}

void sgd_step(ModelState& model, const LossGradients& grads,
              const LearningRates& lr) {
  model.W -= lr.etaW * grads.gradW;
  model.b -= lr.etaB * grads.gradB;
  model.c -= lr.etaC * grads.gradC;
}

AdamUpdate adam_step(ModelState& model, const LossGradients& grads,
                     AdamState& state, const LearningRates& lr,
                     bool project_update) {
  ++state.t;
  const double bc1 = 1.0 - std::pow(state.beta1, state.t);
  const double bc2 = 1.0 - std::pow(state.beta2, state.t);
  AdamUpdate u;
  u.uW = adam_update(state.mW, state.vW, grads.gradW, lr.etaW, state.beta1,
                     state.beta2, state.eps, bc1, bc2);
  u.uB = adam_update(state.mB, state.vB, grads.gradB, lr.etaB, state.beta1,
                     state.beta2, state.eps, bc1, bc2);
  u.uC = adam_update(state.mC, state.vC, grads.gradC, lr.etaC, state.beta1,
                     state.beta2, state.eps, bc1, bc2);
  if (project_update) {
    u.uW = center(u.uW);
    u.uB = center(u.uB);
  }
  model.W += u.uW;
  model.b += u.uB;
  model.c += u.uC;
  return u;
}

}  // namespace denseam
