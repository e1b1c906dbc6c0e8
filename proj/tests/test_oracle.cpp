#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "denseam/oracle.hpp"

using namespace denseam;

TEST_CASE("trace identity closed form") {
  // Scalar case: E[w^4] = 3.
  CHECK(expected_trace_wtw_squared(1, 1) == 3.0);
  CHECK(expected_trace_wtw_squared(2, 3) == 36.0);

  Rng rng(101);
  double acc = 0;
  const long draws = 1000000;
  for (long i = 0; i < draws; ++i) {
    const double w = rng.next_gaussian();
    acc += w * w * w * w;
  }
  CHECK(acc / static_cast<double>(draws) == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("trace identity against monte carlo at K=64, N=32") {
  Rng rng(102);
  const double mc = mc_trace_wtw_squared(64, 32, 500, rng);
  CHECK(mc == doctest::Approx(expected_trace_wtw_squared(64, 32)).epsilon(0.03));
}

TEST_CASE("init output variance closed form substitutions") {
  const Dims d{.n = 64, .k = 128, .p = 1, .b = 32};
  const double s1 = 1.0 / std::sqrt(64.0), s2 = 1.0 / std::sqrt(128.0);
  const double v_g = 0.4;
  // s1^2 s2^2 v_g K (K+N+1) = v_g (1 + K/N + 1/N).
  const double direct = init_output_variance_linear(d, s1, s2, v_g);
  CHECK(direct ==
        doctest::Approx(v_g * (1.0 + 128.0 / 64.0 + 1.0 / 64.0)).epsilon(1e-12));
  // The K >> N behavior that motivates s2 ~ 1/K in the K-only regime.
  const Dims big{.n = 64, .k = 64 * 1024, .p = 1, .b = 32};
  const double huge = init_output_variance_linear(big, s1, s2, v_g);
  const double leading =
      s1 * s1 * s2 * s2 * v_g * static_cast<double>(big.k) * static_cast<double>(big.k);
  CHECK(huge == doctest::Approx(leading).epsilon(2e-3));
}

TEST_CASE("init output variance against monte carlo") {
  Rng rng(103);
  Rng vg_rng(104);
  const double v_g = measure_vg(1000000, vg_rng);
  const Dims d{.n = 64, .k = 128, .p = 32, .b = 32};
  const double s1 = 1.0 / std::sqrt(64.0), s2 = 1.0 / std::sqrt(128.0);
  const double mc = mc_init_output_variance_linear(d, s1, s2, 200, rng);
  CHECK(mc ==
        doctest::Approx(init_output_variance_linear(d, s1, s2, v_g)).epsilon(0.05));
}

TEST_CASE("wishart third moment: white 2x2 case equals 48") {
  // Sigma = I_2, K = 1: E tr((Z^T Z)^3) = E |z|^6 = E[chi^2_2 cubed] = 48.
  CHECK(wishart_trace_cubed(2, 2, 2, 1) == 48.0);
  CHECK(wishart_trace_cubed(1, 1, 1, 0) == 0.0);

  Rng rng(105);
  double acc = 0;
  const long draws = 1000000;
  for (long i = 0; i < draws; ++i) {
    const double a = rng.next_gaussian(), b = rng.next_gaussian();
    const double q = a * a + b * b;
    acc += q * q * q;
  }
  CHECK(acc / static_cast<double>(draws) == doctest::Approx(48.0).epsilon(0.03));
}

TEST_CASE("wishart third moment against monte carlo on a random covariance") {
  Rng sigma_rng(106);
  const Matrix a = sample_gaussian(sigma_rng, 5, 5, 1.0);
  const Matrix sigma = (a * a.transpose()) / 5.0;
  const Matrix sigma2 = sigma * sigma;
  const double t1 = sigma.trace();
  const double t2 = sigma2.trace();
  const double t3 = (sigma2.cwiseProduct(sigma.transpose())).sum();
  Rng rng(107);
  const double mc = mc_wishart_trace_cubed(sigma, 7, 2000, rng);
  CHECK(mc == doctest::Approx(wishart_trace_cubed(t1, t2, t3, 7)).epsilon(0.05));
}

TEST_CASE("marchenko-pastur moment polynomials") {
  const MpMoments limit = mp_moments(1e-12);
  CHECK(limit.m1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(limit.m2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(limit.m3 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(limit.m4 == doctest::Approx(1.0).epsilon(1e-9));

  const MpMoments catalan = mp_moments(1.0);
  CHECK(catalan.m1 == 1.0);
  CHECK(catalan.m2 == 2.0);
  CHECK(catalan.m3 == 5.0);
  CHECK(catalan.m4 == 14.0);
}

TEST_CASE("mp moments increase monotonically in rho_b") {
  double prev2 = 0, prev3 = 0, prev4 = 0;
  for (double r = 0.05; r < 3.0; r += 0.05) {
    const MpMoments m = mp_moments(r);
    CHECK(m.m2 > prev2);
    CHECK(m.m3 > prev3);
    CHECK(m.m4 > prev4);
    prev2 = m.m2;
    prev3 = m.m3;
    prev4 = m.m4;
  }
}

TEST_CASE("empirical covariance traces follow the mp moments") {
  Rng rng(108);
  Rng vg_rng(109);
  const double v_g = measure_vg(1000000, vg_rng);
  const auto est = mc_mp_trace_moments(512, 0.25, 50, v_g, rng);
  const MpMoments m = mp_moments(0.25);
  CHECK(est[0] == doctest::Approx(m.m1).epsilon(0.05));
  CHECK(est[1] == doctest::Approx(m.m2).epsilon(0.05));
  CHECK(est[2] == doctest::Approx(m.m3).epsilon(0.05));
}

TEST_CASE("predicted spikes") {
  CHECK(predicted_spike(ActivationKind::softmax(), 1024, 256) == 0.25);
  CHECK(predicted_spike(ActivationKind::linear(), 100, 10) == 0.0);

  // ReLU^1: m = (1/sqrt 2)(2 pi)^{-1/2}, spike = K B / (4 pi).
  const double spike = predicted_spike(ActivationKind::relu(1), 512, 128);
  CHECK(spike == doctest::Approx(512.0 * 128.0 / (4.0 * std::numbers::pi))
                     .epsilon(1e-12));

  Rng rng(110);
  const double m_mc = mc_activation_mean(ActivationKind::relu(1), 1000000, rng);
  CHECK(m_mc == doctest::Approx(activation_mean(ActivationKind::relu(1)))
                    .epsilon(0.01));
}

TEST_CASE("relu activation means are exact gaussian half moments") {
  // m_p = C_p * (1/2) * E|z|^p.
  CHECK(activation_mean(ActivationKind::relu(1)) ==
        doctest::Approx(std::sqrt(0.5) / std::sqrt(2.0 * std::numbers::pi))
            .epsilon(1e-14));
  CHECK(activation_mean(ActivationKind::relu(2)) ==
        doctest::Approx(std::sqrt(1.5) * 0.5).epsilon(1e-14));
}

TEST_CASE("measured v_g matches the tanh variance under N(0,1)") {
  Rng rng(111);
  const double v_g = measure_vg(1000000, rng);
  CHECK(v_g == doctest::Approx(0.3943).epsilon(0.01));
}

TEST_CASE("the oracle-check table passes at its pinned seed") {
  const auto checks = run_oracle_checks(7);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
    CHECK(c.relative_error ==
          doctest::Approx(std::abs(c.estimated - c.predicted) /
                          std::abs(c.predicted))
              .epsilon(1e-12));
  }
}
