#pragma once

#include <array>
#include <string>
#include <vector>

#include "denseam/model.hpp"
#include "denseam/parameterization.hpp"

namespace denseam {

// Closed-form random-matrix predictions, each paired with a Monte-Carlo
// estimator so the scaling derivations are executable.

// E tr((W^T W)^2) = K N (K + N + 1) for W with iid N(0,1) entries.
double expected_trace_wtw_squared(long k, long n);
double mc_trace_wtw_squared(long k, long n, long draws, Rng& rng);

// E ||F||_F^2 / (N B) = s1^2 s2^2 v_g K (K + N + 1) for the linear model at
// initialization with zero biases.
double init_output_variance_linear(const Dims& dims, double s1, double s2,
                                   double v_g);
double mc_init_output_variance_linear(const Dims& dims, double s1, double s2,
                                      long draws, Rng& rng);

// Third moment of a Wishart matrix Z^T Z with K rows of covariance Sigma_G:
//   E tr((Z^T Z)^3) = K t1^3 + 3K(K+1) t1 t2 + (K^3 + 3K^2 + 4K) t3,
// t_j = tr(Sigma_G^j).
double wishart_trace_cubed(double t1, double t2, double t3, long k);
double mc_wishart_trace_cubed(const Matrix& sigma_g, long k, long draws,
                              Rng& rng);

struct MpMoments {
  double m1 = 1, m2 = 1, m3 = 1, m4 = 1;
};

// Marchenko-Pastur trace moments of Sigma_G = G^T G / N in the proportional
// regime: m1 = 1, m2 = 1 + r, m3 = 1 + 3r + r^2, m4 = 1 + 6r + 6r^2 + r^3.
MpMoments mp_moments(double rho_b);

// Empirical tr(Sigma_G^j) / (B v_g^j) for j = 1..3, averaged over draws of
// G = tanh(X), X iid N(0,1), at B = rho_b * N.
std::array<double, 3> mc_mp_trace_moments(long n, double rho_b, long draws,
                                          double v_g, Rng& rng);

// Mean-induced outlier of the activation Gram matrix: K B m^2 with
// m = E sigma(z) for elementwise activations, exactly B / K for softmax.
double predicted_spike(const ActivationKind& activation, long k, long b);
double mc_activation_mean(const ActivationKind& activation, long samples,
                          Rng& rng);

// Empirical variance of tanh(z), z ~ N(0,1). The theory only needs this to
// be order one; it is measured, not hard-coded.
double measure_vg(long samples, Rng& rng);

struct MomentPrediction {
  std::string name;
  double predicted = 0;
  double estimated = 0;
  long n_samples = 0;
  double relative_error = 0;
  double tolerance = 0;
  bool pass = false;
};

// Runs every closed-form/Monte-Carlo pair at pinned sample counts and
// tolerances. Used by the `oracle-check` CLI subcommand.
std::vector<MomentPrediction> run_oracle_checks(std::uint64_t seed);

}  // namespace denseam
