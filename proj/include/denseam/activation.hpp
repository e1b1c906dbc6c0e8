#pragma once

#include "denseam/linalg.hpp"

namespace denseam {

enum class ActivationType { linear, relu_p, softmax };

// Hidden-layer activation. ReLU^p carries the normalizing constant C_p with
// C_p^2 = (1/2)(2p-1)!! so that E[sigma(z)^2] = 1 for z ~ N(0,1); the
// double factorial is evaluated in exact integer arithmetic. Softmax acts
// per column with inverse temperature beta and sums to one.
struct ActivationKind {
  ActivationType type = ActivationType::linear;
  int p = 1;
  double beta = 1.0;
  double norm_const = 1.0;  // C_p for relu_p, 1 otherwise

  static ActivationKind linear();
  static ActivationKind relu(int p);
  static ActivationKind softmax(double beta = 1.0);

  bool elementwise() const { return type != ActivationType::softmax; }
  const char* name() const;
};

// C_p = sqrt((1/2)(2p-1)!!), the ReLU^p second-moment normalizer.
double relu_norm_constant(int p);

// Closed-form E[sigma(z)] for z ~ N(0,1) (elementwise activations only).
// Linear gives 0; ReLU^p gives C_p * (1/2) * E|z|^p with
// E|z|^p = (p-1)!! * sqrt(2/pi) for odd p and (p-1)!! for even p.
double activation_mean(const ActivationKind& act);

// s = sigma(z) entrywise; if sprime is non-null it receives sigma'(z).
// Precondition: act.elementwise().
void apply_elementwise(const ActivationKind& act, const Matrix& z, Matrix& s,
                       Matrix* sprime);

// Column-wise softmax(beta * z) with per-column max subtraction, so logits
// beyond the exp range degrade gracefully instead of overflowing.
Matrix softmax_columns(const Matrix& z, double beta);

// J v for the softmax Jacobian J = beta * (diag(sigma) - sigma sigma^T)
// evaluated at a single column's activation `sigma`. O(K), never forms J.
Vector softmax_jacobian_apply(const Vector& sigma, const Vector& v,
                              double beta);

// Hidden Lagrangian L_h evaluated at preactivations h (one state vector),
// chosen so that sigma(h) = s1 * dL_h/dh holds exactly for every s1:
//   linear:   sum h^2 / (2 s1)
//   relu_p:   sum C_p max(h,0)^{p+1} / ((p+1) s1)
//   softmax:  log-sum-exp(beta h) / (s1 beta)
double hidden_lagrangian(const ActivationKind& act, const Vector& h,
                         double s1);

}  // namespace denseam
