#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "denseam/diagnostics.hpp"
#include "denseam/oracle.hpp"

using namespace denseam;

TEST_CASE("rank-one activations give lambda_max = B m^2 and zero bulk") {
  const double m = 0.7;
  const Matrix s = m * Matrix::Ones(12, 5);
  const auto [lmax, l2] = gram_spike_bulk(s);
  CHECK(lmax == doctest::Approx(5 * m * m).epsilon(1e-12));
  CHECK(std::abs(l2) < 1e-12);
}

TEST_CASE("softmax gram at initialization is bounded below by the mean spike") {
  Rng rng(91);
  const Index k = 64, b = 16;
  const Matrix z = sample_gaussian(rng, k, b, 1.0);
  const Matrix s = softmax_columns(z, 1.0);
  const auto [lmax, l2] = gram_spike_bulk(s);
  // Unnormalized S^T S has the exact rank-one component (1/K) 1 1^T of
  // eigenvalue B/K; the centered remainder only adds nonnegative spectrum.
  CHECK(lmax * static_cast<double>(k) >=
        static_cast<double>(b) / static_cast<double>(k) - 1e-12);
}

TEST_CASE("centering strips the mean spike of a relu layer") {
  Rng rng(92);
  const Index k = 128, b = 32;
  const Matrix z = sample_gaussian(rng, k, b, 1.0);
  Matrix s;
  apply_elementwise(ActivationKind::relu(1), z, s, nullptr);
  const auto [lmax_raw, l2_raw] = gram_spike_bulk(s);
  const auto [lmax_cent, l2_cent] = gram_spike_bulk(center(s));
  CHECK(lmax_cent < 0.5 * lmax_raw);
  // Bulk scale is barely affected.
  CHECK(l2_raw == doctest::Approx(lmax_cent).epsilon(0.5));
}

TEST_CASE("participation ratio closed forms") {
  CHECK(participation_ratio(Vector::Constant(10, 0.1)) ==
        doctest::Approx(10.0).epsilon(1e-12));

  Vector onehot = Vector::Zero(6);
  onehot[2] = 1.0;
  CHECK(participation_ratio(onehot) == doctest::Approx(1.0).epsilon(1e-12));

  Vector half(4);
  half << 0.5, 0.5, 0, 0;
  CHECK(participation_ratio(half) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(participation_ratio_centered(half) ==
        doctest::Approx(4.0).epsilon(1e-12));  // K K_eff / (K - K_eff)
}

TEST_CASE("uniform softmax reports an infinite centered width") {
  CHECK(std::isinf(participation_ratio_centered(Vector::Constant(8, 0.125))));
}

TEST_CASE("centered norm identity |C sigma|^2 = |sigma|^2 - 1/K") {
  Rng rng(93);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix z = sample_gaussian(rng, 33, 1, 1.0);
    const Vector sigma = softmax_columns(z, 1.0).col(0);
    const double lhs = center(sigma).squaredNorm();
    const double rhs = sigma.squaredNorm() - 1.0 / 33.0;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("softmax gram decomposition is exact") {
  Rng rng(94);
  const Index k = 256, b = 64;
  const Matrix z = sample_gaussian(rng, k, b, 1.0);
  const Matrix s = softmax_columns(z, 1.0);
  const Matrix stilde = center(s);
  const Matrix residual = s.transpose() * s - stilde.transpose() * stilde -
                          Matrix::Ones(b, b) / static_cast<double>(k);
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("desiderata probe reports the defining rms values") {
  Rng rng(95);
  ModelState m = init_model(rng, 7, 5, ActivationKind::relu(1), 0.4, 0.5, true);
  const Matrix x = sample_gaussian(rng, 5, 4, 1.0);
  const BatchTensors batch = forward(m, x);
  const UpdateDecomposition dec =
      sgd_update_decomposition(m, batch, LearningRates{0.1, 0.1, 0.1});
  const DiagnosticsRecord rec = desiderata_probe(m, batch, dec);
  CHECK(rec.rms_dz1 ==
        doctest::Approx(dec.dZ1.norm() / std::sqrt(28.0)).epsilon(1e-12));
  CHECK(rec.rms_z ==
        doctest::Approx(batch.Z.norm() / std::sqrt(28.0)).epsilon(1e-12));
  CHECK(rec.mse == doctest::Approx(mse_loss(batch.F, x)).epsilon(1e-12));
  CHECK(rec.lambda_max >= rec.lambda2);
  CHECK(rec.lambda2 >= -1e-12);
  CHECK(std::isnan(rec.k_eff));  // not a softmax model
}

TEST_CASE("zero-weight model draws its preactivation rms from the bias") {
  Rng rng(96);
  ModelState m = init_model(rng, 6, 4, ActivationKind::relu(1), 0.5, 0.5, false);
  m.W.setZero();
  const Matrix x = sample_gaussian(rng, 4, 3, 1.0);
  const BatchTensors batch = forward(m, x);
  const UpdateDecomposition dec =
      sgd_update_decomposition(m, batch, LearningRates{0, 0, 0});
  const DiagnosticsRecord rec = desiderata_probe(m, batch, dec);
  CHECK(rec.rms_z ==
        doctest::Approx(m.b.norm() / std::sqrt(6.0)).epsilon(1e-12));
}

TEST_CASE("softmax probe records batch-mean participation ratios") {
  Rng rng(97);
  ModelState m = init_model(rng, 16, 6, ActivationKind::softmax(), 0.4, 1.0, true);
  const Matrix x = sample_gaussian(rng, 6, 5, 1.0);
  const BatchTensors batch = forward(m, x);
  const UpdateDecomposition dec =
      sgd_update_decomposition(m, batch, LearningRates{0.1, 0, 0});
  const DiagnosticsRecord rec = desiderata_probe(m, batch, dec);
  CHECK(rec.k_eff > 1.0);
  CHECK(rec.k_eff <= 16.0);
  CHECK(rec.k_eff_centered >= rec.k_eff - 1e-9);
}
