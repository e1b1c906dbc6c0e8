#include "denseam/gradients.hpp"

#include <cmath>
#include <stdexcept>

namespace denseam {
namespace {

// Hidden-path contraction: columns J_mu * v_mu for elementwise sigma
// (J = diag(S')) or softmax (rank-one corrected diagonal).
Matrix hidden_jacobian_contract(const ModelState& model,
                                const BatchTensors& batch, const Matrix& v) {
  if (model.activation.elementwise()) {
    return batch.Sprime.cwiseProduct(v);
  }
  Matrix t(v.rows(), v.cols());
  for (Index mu = 0; mu < v.cols(); ++mu) {
    t.col(mu) = softmax_jacobian_apply(batch.S.col(mu), v.col(mu),
                                       model.activation.beta);
  }
  return t;
}

}  // namespace

LossGradients loss_gradients(const ModelState& model,
                             const BatchTensors& batch) {
  const double bsz = static_cast<double>(batch.G.cols());
  const Matrix wt = model.effective_w();
  const Matrix s_used = model.centered ? Matrix(center(batch.S)) : batch.S;

  LossGradients g;
  g.gradW1 = (model.s2 / bsz) * (s_used * batch.R.transpose());
  const Matrix wr = wt * batch.R;  // K x B
  const Matrix t = hidden_jacobian_contract(model, batch, wr);
  g.gradW2 = (model.s1 * model.s2 / bsz) * (t * batch.G.transpose());
  g.gradB = (model.s2 / bsz) * t.rowwise().sum();
  if (model.centered) {
    // Chain rule through Wt = C W, bt = C b.
    g.gradW1 = center(g.gradW1);
    g.gradW2 = center(g.gradW2);
    g.gradB = center(g.gradB);
  }
  g.gradW = g.gradW1 + g.gradW2;
  g.gradC = batch.R.rowwise().sum() / bsz;
  return g;
}

UpdateDecomposition sgd_update_decomposition(const ModelState& model,
                                             const BatchTensors& batch,
                                             const LearningRates& lr) {
  const LossGradients g = loss_gradients(model, batch);
  UpdateDecomposition d;
  d.dW1 = -lr.etaW * g.gradW1;
  d.dW2 = -lr.etaW * g.gradW2;
  d.dZ1 = model.s1 * (d.dW1 * batch.G);
  d.dZ2 = model.s1 * (d.dW2 * batch.G);
  d.dB = -lr.etaB * g.gradB;
  d.dC = -lr.etaC * g.gradC;

  const Matrix wt = model.effective_w();
  const Matrix s_used = model.centered ? Matrix(center(batch.S)) : batch.S;
  d.dF11 = model.s2 * (d.dW1.transpose() * s_used);
  d.dF12 = model.s2 * (d.dW2.transpose() * s_used);
  const Matrix t1 = hidden_jacobian_contract(model, batch, d.dZ1);
  const Matrix t2 = hidden_jacobian_contract(model, batch, d.dZ2);
  d.dF21 = model.s2 * (wt.transpose() * t1);
  d.dF22 = model.s2 * (wt.transpose() * t2);
  return d;
}

Vector adam_row_mean(const Matrix& update) {
  return update.colwise().mean().transpose();
}

double rms(const Matrix& m) {
  const double count = static_cast<double>(m.size());
  return count > 0 ? m.norm() / std::sqrt(count) : 0.0;
}

double rms(const Vector& v) {
  const double count = static_cast<double>(v.size());
  return count > 0 ? v.norm() / std::sqrt(count) : 0.0;
}

}  // namespace denseam
