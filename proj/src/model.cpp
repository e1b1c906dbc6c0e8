#include "denseam/model.hpp"

#include <cmath>
#include <stdexcept>

namespace denseam {
namespace {

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

}  // namespace

double input_lagrangian(InputNonlinearity g, const Vector& x, double s2) {
  double total = 0;
  if (g == InputNonlinearity::tanh_fn) {
    for (Index i = 0; i < x.size(); ++i) total += log_cosh(x[i]);
  } else {
    total = 0.5 * x.squaredNorm();
  }
  return total / s2;
}

Matrix ModelState::effective_w() const { return centered ? center(W) : W; }
Vector ModelState::effective_b() const { return centered ? center(b) : b; }

ModelState init_model(Rng& rng, Index k, Index n, const ActivationKind& act,
                      double s1, double s2, bool centered,
                      BiasInit bias_init) {
  ModelState m;
  m.W = sample_gaussian(rng, k, n, 1.0);
  if (bias_init == BiasInit::standard_gaussian) {
    m.b = sample_gaussian_vector(rng, k, 1.0);
    m.c = sample_gaussian_vector(rng, n, 1.0);
  } else {
    m.b = Vector::Zero(k);
    m.c = Vector::Zero(n);
  }
  m.s1 = s1;
  m.s2 = s2;
  m.centered = centered;
  m.activation = act;
  return m;
}

Matrix center(const Matrix& m) {
  return m.rowwise() - m.colwise().mean();
}

Vector center(const Vector& v) {
  return v.array() - v.mean();
}

Matrix apply_input_nonlinearity(InputNonlinearity g, const Matrix& x) {
  if (g == InputNonlinearity::identity) return x;
  return x.array().tanh();
}

BatchTensors forward(const ModelState& model, const Matrix& x) {
  return forward(model, x, x);
}

BatchTensors forward(const ModelState& model, const Matrix& x,
                     const Matrix& y) {
  if (x.rows() != model.n()) {
    throw std::invalid_argument("forward: input rows do not match model N");
  }
  if (y.rows() != x.rows() || y.cols() != x.cols()) {
    throw std::invalid_argument("forward: target shape does not match input");
  }
  BatchTensors t;
  t.G = apply_input_nonlinearity(model.g, x);
  const Matrix wt = model.effective_w();
  const Vector bt = model.effective_b();
  t.Z = model.s1 * (wt * t.G);
  t.Z.colwise() += bt;
  if (model.activation.elementwise()) {
    apply_elementwise(model.activation, t.Z, t.S, &t.Sprime);
  } else {
    t.S = softmax_columns(t.Z, model.activation.beta);
  }
  const Matrix s_used = model.centered ? Matrix(center(t.S)) : t.S;
  t.F = model.s2 * (wt.transpose() * s_used);
  t.F.colwise() += model.c;
  t.R = t.F - y;
  return t;
}

double mse_loss(const Matrix& f, const Matrix& y) {
  if (f.rows() != y.rows() || f.cols() != y.cols()) {
    throw std::invalid_argument("mse_loss: shape mismatch");
  }
  return (f - y).squaredNorm() / (2.0 * static_cast<double>(f.cols()));
}

double effective_energy(const ModelState& model, const Vector& x) {
  const Matrix wt = model.effective_w();
  const Vector bt = model.effective_b();
  const Vector g = apply_input_nonlinearity(model.g, x);
  const Vector h = model.s1 * (wt * g) + bt;
  const double lh = hidden_lagrangian(model.activation, h, model.s1);
  const double coupling = g.dot(x - model.c) / model.s2;
  const double lx = input_lagrangian(model.g, x, model.s2);
  return -lh + coupling - lx;
}

Vector dynamics_step(const ModelState& model, const Vector& x, double dt) {
  const Matrix wt = model.effective_w();
  const Vector bt = model.effective_b();
  const Vector g = apply_input_nonlinearity(model.g, x);
  const Vector z = model.s1 * (wt * g) + bt;
  Vector s;
  if (model.activation.elementwise()) {
    Matrix ss;
    apply_elementwise(model.activation, Matrix(z), ss, nullptr);
    s = ss;
  } else {
    s = softmax_columns(z, model.activation.beta);
  }
  if (model.centered) s = center(s);
  const Vector fx = model.s2 * (wt.transpose() * s) + model.c;
  return x + dt * (fx - x);
}

DynamicsTrace run_dynamics(const ModelState& model, const Vector& x0,
                           double dt, int steps) {
  if (steps < 1) throw std::invalid_argument("run_dynamics: steps must be >= 1");
  DynamicsTrace trace;
  trace.states.reserve(static_cast<std::size_t>(steps) + 1);
  trace.energies.reserve(static_cast<std::size_t>(steps) + 1);
  Vector x = x0;
  trace.states.push_back(x);
  trace.energies.push_back(effective_energy(model, x));
  for (int i = 0; i < steps; ++i) {
    x = dynamics_step(model, x, dt);
    trace.states.push_back(x);
    trace.energies.push_back(effective_energy(model, x));
  }
  return trace;
}

}  // namespace denseam
