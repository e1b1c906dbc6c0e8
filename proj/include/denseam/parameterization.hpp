#pragma once

#include <limits>
#include <string>

#include "denseam/activation.hpp"

namespace denseam {

// The four scale parameters and their dimensionless ratios.
struct Dims {
  long n = 1;  // input/output dimension
  long k = 1;  // hidden width
  long p = 1;  // dataset size
  long b = 1;  // batch size

  double kappa() const { return static_cast<double>(k) / n; }
  double rho() const { return static_cast<double>(p) / n; }
  double beta() const { return static_cast<double>(b) / p; }
  double rho_b() const { return static_cast<double>(b) / n; }
};

enum class RegimeKind { proportional, k_only };

// Proportional: K = ceil(kappa N), P = ceil(rho N), B = ceil(beta P), scale
// parameter is N. K-only: N, P fixed, B = ceil(beta P), scale parameter is K.
struct ScalingRegime {
  RegimeKind kind = RegimeKind::proportional;
  double kappa = 1.0;
  double rho = 1.0;
  double beta = 1.0;
  long n_fixed = 0;
  long p_fixed = 0;

  static ScalingRegime proportional(double kappa, double rho, double beta);
  static ScalingRegime k_only(long n, long p, double beta);
};

// Concrete dimensions at one rung of the scale ladder. B is clamped to
// [1, P] after rounding.
Dims dims_for(const ScalingRegime& regime, long scale);

enum class OptimizerKind { sgd, adam };
const char* optimizer_name(OptimizerKind opt);

// One prescription row as exponents: s1 = s10 * N^a1 K^b1, s2 = s20 * N^a2
// K^b2, etaW = eta0 * K^e. The data-driven fidelity test asserts these
// symbolically.
struct ScalingRule {
  double s1_exp_n = -0.5;
  double s1_exp_k = 0.0;
  double s2_exp_n = 0.0;
  double s2_exp_k = 0.0;
  double etaw_exp_k = 0.0;
  std::string provenance;
};

// Looks up the rule for a (regime, activation, optimizer) triple. Linear
// activations inherit the ReLU^p rows. Softmax with SGD has no stable
// prescription (row-gradient amplification feedback) and is refused unless
// `softmax_sgd_override` supplies the experimental recipe used for the
// instability studies: s2 = sqrt(K) (proportional) or sqrt(N) (K-only) with
// etaW = eta0 * K.
ScalingRule scaling_rule(const ScalingRegime& regime,
                         const ActivationKind& activation, OptimizerKind opt,
                         bool softmax_sgd_override = false);

struct Prescription {
  double s1 = 1.0;
  double s2 = 1.0;
  double etaW = 0.0;
  double etaB = 0.0;
  double etaC = 0.0;
  std::string provenance;
};

// Concrete scales and learning rates at the given dimensions. etaB0/etaC0
// default to eta0 when NaN; s10/s20 are the order-one constants.
Prescription prescription(const ScalingRegime& regime,
                          const ActivationKind& activation, OptimizerKind opt,
                          const Dims& dims, double eta0,
                          double etaB0 = std::numeric_limits<double>::quiet_NaN(),
                          double etaC0 = std::numeric_limits<double>::quiet_NaN(),
                          bool softmax_sgd_override = false, double s10 = 1.0,
                          double s20 = 1.0);

}  // namespace denseam
