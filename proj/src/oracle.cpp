#include "denseam/oracle.hpp"

#include <array>
#include <cmath>

namespace denseam {

double expected_trace_wtw_squared(long k, long n) {
  return static_cast<double>(k) * static_cast<double>(n) *
         static_cast<double>(k + n + 1);
}

double mc_trace_wtw_squared(long k, long n, long draws, Rng& rng) {
  double total = 0;
  for (long d = 0; d < draws; ++d) {
    const Matrix w = sample_gaussian(rng, k, n, 1.0);
    const Matrix wtw = w.transpose() * w;
    total += wtw.squaredNorm();  // tr((W^T W)^2) = ||W^T W||_F^2
  }
  return total / static_cast<double>(draws);
}

double init_output_variance_linear(const Dims& dims, double s1, double s2,
                                   double v_g) {
  return s1 * s1 * s2 * s2 * v_g * static_cast<double>(dims.k) *
         static_cast<double>(dims.k + dims.n + 1);
}

double mc_init_output_variance_linear(const Dims& dims, double s1, double s2,
                                      long draws, Rng& rng) {
  double total = 0;
  for (long d = 0; d < draws; ++d) {
    const Matrix w = sample_gaussian(rng, dims.k, dims.n, 1.0);
    const Matrix x = sample_gaussian(rng, dims.n, dims.b, 1.0);
    const Matrix g = x.array().tanh();
    const Matrix f = (s1 * s2) * (w.transpose() * (w * g));
    total += f.squaredNorm() /
             static_cast<double>(dims.n * dims.b);
  }
  return total / static_cast<double>(draws);
}

double wishart_trace_cubed(double t1, double t2, double t3, long k) {
  const double kd = static_cast<double>(k);
  return kd * t1 * t1 * t1 + 3.0 * kd * (kd + 1.0) * t1 * t2 +
         (kd * kd * kd + 3.0 * kd * kd + 4.0 * kd) * t3;
}

double mc_wishart_trace_cubed(const Matrix& sigma_g, long k, long draws,
                              Rng& rng) {
  // Rows of Z are N(0, Sigma_G): z^T = xi^T L^T with Sigma_G = L L^T.
  const Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(sigma_g)};
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("mc_wishart_trace_cubed: Sigma_G not PSD");
  }
  const Matrix l = llt.matrixL();
  double total = 0;
  for (long d = 0; d < draws; ++d) {
    const Matrix xi = sample_gaussian(rng, k, sigma_g.rows(), 1.0);
    const Matrix z = xi * l.transpose();
    const Matrix gram = z.transpose() * z;
    total += (gram * gram).cwiseProduct(gram.transpose()).sum();  // tr(gram^3)
  }
  return total / static_cast<double>(draws);
}

MpMoments mp_moments(double rho_b) {
  if (!(rho_b > 0)) throw std::invalid_argument("mp_moments: rho_b must be > 0");
  MpMoments m;
  m.m1 = 1.0;
  m.m2 = 1.0 + rho_b;
  m.m3 = 1.0 + 3.0 * rho_b + rho_b * rho_b;
  m.m4 = 1.0 + 6.0 * rho_b + 6.0 * rho_b * rho_b + rho_b * rho_b * rho_b;
  return m;
}

std::array<double, 3> mc_mp_trace_moments(long n, double rho_b, long draws,
                                          double v_g, Rng& rng) {
  const long b = static_cast<long>(std::lround(rho_b * static_cast<double>(n)));
  std::array<double, 3> acc{0, 0, 0};
  for (long d = 0; d < draws; ++d) {
    const Matrix x = sample_gaussian(rng, n, b, 1.0);
    const Matrix g = x.array().tanh();
    const Matrix sigma = (g.transpose() * g) / static_cast<double>(n);
    const Matrix sigma2 = sigma * sigma;
    acc[0] += sigma.trace();
    acc[1] += sigma2.trace();
    acc[2] += (sigma2.cwiseProduct(sigma.transpose())).sum();
  }
  for (int j = 0; j < 3; ++j) {
    acc[static_cast<std::size_t>(j)] /=
        static_cast<double>(draws) * static_cast<double>(b) *
        std::pow(v_g, j + 1);
  }
  return acc;
}

double predicted_spike(const ActivationKind& activation, long k, long b) {
  if (activation.type == ActivationType::softmax) {
    return static_cast<double>(b) / static_cast<double>(k);
  }
  const double m = activation_mean(activation);
  return static_cast<double>(k) * static_cast<double>(b) * m * m;
}

double mc_activation_mean(const ActivationKind& activation, long samples,
                          Rng& rng) {
  Matrix z = sample_gaussian(rng, samples, 1, 1.0);
  Matrix s;
  apply_elementwise(activation, z, s, nullptr);
  return s.mean();
}

double measure_vg(long samples, Rng& rng) {
  double sum = 0, sumsq = 0;
  for (long i = 0; i < samples; ++i) {
    const double t = std::tanh(rng.next_gaussian());
    sum += t;
    sumsq += t * t;
  }
  const double mean = sum / static_cast<double>(samples);
  return sumsq / static_cast<double>(samples) - mean * mean;
}

namespace {

MomentPrediction make_check(const std::string& name, double predicted,
                            double estimated, long samples, double tol) {
  MomentPrediction p;
  p.name = name;
  p.predicted = predicted;
  p.estimated = estimated;
  p.n_samples = samples;
  p.relative_error = predicted != 0
                         ? std::abs(estimated - predicted) / std::abs(predicted)
                         : std::abs(estimated - predicted);
  p.tolerance = tol;
  p.pass = p.relative_error < tol;
  return p;
}

}  // namespace

std::vector<MomentPrediction> run_oracle_checks(std::uint64_t seed) {
  std::vector<MomentPrediction> checks;
  Rng root(seed);

  {
    Rng rng = root.split(1);
    const long k = 64, n = 32, draws = 500;
    checks.push_back(make_check(
        "trace_wtw_squared(K=64,N=32)", expected_trace_wtw_squared(k, n),
        mc_trace_wtw_squared(k, n, draws, rng), draws, 0.03));
  }
  {
    Rng rng = root.split(2);
    Dims dims{.n = 64, .k = 128, .p = 32, .b = 32};
    const double s1 = 1.0 / std::sqrt(64.0), s2 = 1.0 / std::sqrt(128.0);
    Rng vg_rng = root.split(3);
    const double v_g = measure_vg(1000000, vg_rng);
    const long draws = 200;
    checks.push_back(make_check(
        "init_output_variance_linear(N=64,K=128,B=32)",
        init_output_variance_linear(dims, s1, s2, v_g),
        mc_init_output_variance_linear(dims, s1, s2, draws, rng), draws,
        0.05));
  }
  {
    Rng rng = root.split(4);
    const long b = 5, k = 7, draws = 2000;
    Rng sigma_rng = root.split(5);
    const Matrix a = sample_gaussian(sigma_rng, b, b, 1.0);
    const Matrix sigma_g = (a * a.transpose()) / static_cast<double>(b);
    const Matrix sigma2 = sigma_g * sigma_g;
    const double t1 = sigma_g.trace();
    const double t2 = sigma2.trace();
    const double t3 = (sigma2.cwiseProduct(sigma_g.transpose())).sum();
    checks.push_back(make_check(
        "wishart_trace_cubed(B=5,K=7)", wishart_trace_cubed(t1, t2, t3, k),
        mc_wishart_trace_cubed(sigma_g, k, draws, rng), draws, 0.05));
  }
  {
    Rng rng = root.split(6);
    const long n = 512, draws = 50;
    const double rho_b = 0.25;
    Rng vg_rng = root.split(7);
    const double v_g = measure_vg(1000000, vg_rng);
    const auto est = mc_mp_trace_moments(n, rho_b, draws, v_g, rng);
    const MpMoments m = mp_moments(rho_b);
    const std::array<double, 3> predicted{m.m1, m.m2, m.m3};
    for (int j = 0; j < 3; ++j) {
      checks.push_back(make_check(
          "mp_moment_m" + std::to_string(j + 1) + "(N=512,rho_b=0.25)",
          predicted[static_cast<std::size_t>(j)],
          est[static_cast<std::size_t>(j)], draws, 0.05));
    }
  }
  {
    Rng rng = root.split(8);
    const ActivationKind relu1 = ActivationKind::relu(1);
    const long samples = 1000000;
    checks.push_back(make_check("activation_mean(relu1)",
                                activation_mean(relu1),
                                mc_activation_mean(relu1, samples, rng),
                                samples, 0.01));
  }
  return checks;
}

}  // namespace denseam
