#pragma once

#include <vector>

#include "denseam/activation.hpp"
#include "denseam/linalg.hpp"

namespace denseam {

// Input nonlinearity g. Fixed to tanh for the model proper; the identity
// variant exists only as a test fixture so oracle comparisons can work with
// exactly Gaussian preactivations.
enum class InputNonlinearity { tanh_fn, identity };

// One shallow tied-weight associative memory:
//   f(x) = s2 * Wt^T * sigma_used(s1 * Wt * g(x) + bt) + c
// with Wt = C W, bt = C b when centered (C = I - (1/K) 11^T), and the
// post-activations additionally projected by C in the centered case.
struct ModelState {
  Matrix W;  // K x N
  Vector b;  // K
  Vector c;  // N
  double s1 = 1.0;
  double s2 = 1.0;
  bool centered = false;
  ActivationKind activation = ActivationKind::linear();
  InputNonlinearity g = InputNonlinearity::tanh_fn;

  Index n() const { return W.cols(); }
  Index k() const { return W.rows(); }

  // Column-centered weights / centered bias as seen by the forward map.
  Matrix effective_w() const;
  Vector effective_b() const;
};

// Bias initialization. The theory convention draws b, c ~ N(0,1) alongside
// W; the collapse experiments start the biases at zero, because a random
// O(1) output bias leaves a batch-coherent residual of norm sqrt(N) that
// feeds a non-collapsing rank-one term into the outer weight update until
// c has been trained away.
enum class BiasInit { standard_gaussian, zero };

ModelState init_model(Rng& rng, Index k, Index n, const ActivationKind& act,
                      double s1, double s2, bool centered,
                      BiasInit bias_init = BiasInit::standard_gaussian);

// Applies C = I - (1/K) 11^T along the first axis: subtracts each column's
// mean. Idempotent; annihilates constant columns.
Matrix center(const Matrix& m);
Vector center(const Vector& v);

// All per-batch tensors of the forward pass. S holds the raw activations
// sigma(Z) (for softmax its columns sum to one); the centered projection
// C S is applied when forming F but not stored. Sprime is empty for softmax.
struct BatchTensors {
  Matrix G;       // N x B, g applied to inputs
  Matrix Z;       // K x B, preactivations s1*Wt*G + bt*1^T
  Matrix S;       // K x B, sigma(Z)
  Matrix Sprime;  // K x B, sigma'(Z); elementwise activations only
  Matrix F;       // N x B, outputs
  Matrix R;       // N x B, residuals F - Y
};

Matrix apply_input_nonlinearity(InputNonlinearity g, const Matrix& x);

// Input Lagrangian L_x with g = s2 * dL_x/dx: sum log cosh(x_i) / s2 for
// tanh, sum x_i^2 / (2 s2) for the identity fixture.
double input_lagrangian(InputNonlinearity g, const Vector& x, double s2);

// Forward pass over a batch; targets default to the inputs themselves.
BatchTensors forward(const ModelState& model, const Matrix& x);
BatchTensors forward(const ModelState& model, const Matrix& x,
                     const Matrix& y);

// (1/2B) ||F - Y||_F^2.
double mse_loss(const Matrix& f, const Matrix& y);

// Effective energy of the adiabatic single-state dynamics:
//   E = -L_h[s1*Wt*g(x) + bt] + (1/s2) g(x).(x - c) - L_x(x)
// with L_x the input Lagrangian satisfying g = s2 * dL_x/dx.
double effective_energy(const ModelState& model, const Vector& x);

// One Euler step x <- x + dt * (-x + s2*Wt^T sigma_used(...) + c).
// dt = 1 reproduces the forward map exactly.
Vector dynamics_step(const ModelState& model, const Vector& x, double dt);

struct DynamicsTrace {
  std::vector<Vector> states;    // steps + 1 entries, starting at x0
  std::vector<double> energies;  // effective energy at each state
};

DynamicsTrace run_dynamics(const ModelState& model, const Vector& x0,
                           double dt, int steps);

}  // namespace denseam
