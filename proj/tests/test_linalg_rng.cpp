#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "denseam/linalg.hpp"
#include "denseam/model.hpp"

using namespace denseam;

namespace {

// Reference product: plain triple loop, no blocking, no vectorization.
Matrix naive_gemm(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      double acc = 0;
      for (Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
  return c;
}

// Cyclic Jacobi eigensolver for small symmetric matrices, independent of
// the library solver.
std::vector<double> jacobi_eigenvalues(Matrix a) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-24) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (Index i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  std::vector<double> evs(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) evs[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(evs.begin(), evs.end(), std::greater<>());
  return evs;
}

}  // namespace

TEST_CASE("gemm identity and hand arithmetic") {
  Matrix i2 = Matrix::Identity(2, 2);
  CHECK(gemm(i2, i2).isApprox(i2, 1e-15));

  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  Matrix v(2, 1);
  v << 1, 1;
  const Matrix prod = gemm(a, v);
  CHECK(prod(0, 0) == doctest::Approx(3).epsilon(1e-15));
  CHECK(prod(1, 0) == doctest::Approx(7).epsilon(1e-15));
}

TEST_CASE("gemm transposes and dimension checks") {
  Rng rng(11);
  const Matrix a = sample_gaussian(rng, 4, 6, 1.0);
  const Matrix b = sample_gaussian(rng, 4, 5, 1.0);
  CHECK(gemm(a, b, true, false).isApprox(naive_gemm(a.transpose(), b), 1e-13));
  CHECK(gemm(b, a, true, false).rows() == 5);
  CHECK(gemm(a, a, false, true).isApprox(naive_gemm(a, a.transpose()), 1e-13));
  CHECK_THROWS_AS(gemm(a, b), std::invalid_argument);
}

TEST_CASE("gemm matches the naive triple-loop oracle on 64x64") {
  Rng rng(1);
  const Matrix a = sample_gaussian(rng, 64, 64, 1.0);
  const Matrix b = sample_gaussian(rng, 64, 64, 1.0);
  const Matrix fast = gemm(a, b);
  const Matrix slow = naive_gemm(a, b);
  CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gemm re-association error is bounded on 256x256 inputs") {
  Rng rng(2);
  const Matrix a = sample_gaussian(rng, 256, 256, 1.0);
  const Matrix b = sample_gaussian(rng, 256, 256, 1.0);
  const Matrix c = sample_gaussian(rng, 256, 256, 1.0);
  const Matrix left = gemm(gemm(a, b), c);
  const Matrix right = gemm(a, gemm(b, c));
  CHECK((left - right).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sym_top_eigs on diagonal and rank-one matrices") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 2, 1;
  const auto top = sym_top_eigs(d, 2);
  CHECK(top[0] == doctest::Approx(3).epsilon(1e-12));
  CHECK(top[1] == doctest::Approx(2).epsilon(1e-12));

  // (1/K) * ones(B x B) with B = 20, K = 5 has top eigenvalue B/K = 4.
  const Matrix ones_gram = Matrix::Ones(20, 20) / 5.0;
  CHECK(sym_top_eigs(ones_gram, 1)[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("sym_top_eigs matches the Jacobi oracle on a random 30x30") {
  Rng rng(3);
  const Matrix a = sample_gaussian(rng, 30, 30, 1.0);
  const Matrix sym = 0.5 * (a + a.transpose());
  const auto lib = sym_top_eigs(sym, 30);
  const auto oracle = jacobi_eigenvalues(sym);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(lib[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
  }
}

TEST_CASE("sym_top_eigs rejects non-symmetric input") {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  CHECK_THROWS_AS(sym_top_eigs(a, 1), std::invalid_argument);
}

TEST_CASE("centering matrix spectrum: eigenvalue 1 with multiplicity K-1") {
  const Index k = 17;
  const Matrix c =
      Matrix::Identity(k, k) - Matrix::Ones(k, k) / static_cast<double>(k);
  const auto evs = sym_top_eigs(c, static_cast<int>(k));
  for (Index i = 0; i < k - 1; ++i) {
    CHECK(evs[static_cast<std::size_t>(i)] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(std::abs(evs.back()) < 1e-12);
}

TEST_CASE("sample_gaussian basics") {
  Rng rng(7);
  CHECK(sample_gaussian(rng, 3, 4, 0.0).cwiseAbs().maxCoeff() == 0.0);

  Rng a(42), b(42);
  const Matrix ma = sample_gaussian(a, 10, 10, 1.0);
  const Matrix mb = sample_gaussian(b, 10, 10, 1.0);
  CHECK((ma - mb).cwiseAbs().maxCoeff() == 0.0);  // bit-for-bit
}

TEST_CASE("sample_gaussian law of large numbers") {
  Rng rng(123);
  const long n = 1000000;
  const Matrix m = sample_gaussian(rng, n, 1, 1.0);
  CHECK(std::abs(m.mean()) < 4.0 / std::sqrt(static_cast<double>(n)));
  const double var = m.squaredNorm() / static_cast<double>(n) -
                     m.mean() * m.mean();
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("distinct seeds give uncorrelated streams") {
  Rng a(1), b(2);
  const long n = 100000;
  double sum_ab = 0, sum_a = 0, sum_b = 0, sum_a2 = 0, sum_b2 = 0;
  for (long i = 0; i < n; ++i) {
    const double x = a.next_gaussian();
    const double y = b.next_gaussian();
    sum_ab += x * y;
    sum_a += x;
    sum_b += y;
    sum_a2 += x * x;
    sum_b2 += y * y;
  }
  const double nd = static_cast<double>(n);
  const double cov = sum_ab / nd - (sum_a / nd) * (sum_b / nd);
  const double corr = cov / std::sqrt((sum_a2 / nd - (sum_a / nd) * (sum_a / nd)) *
                                      (sum_b2 / nd - (sum_b / nd) * (sum_b / nd)));
  CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("split streams are independent of the parent and each other") {
  Rng parent(9);
  Rng c1 = parent.split(1);
  Rng c2 = parent.split(2);
  CHECK(c1.seed() != c2.seed());
  CHECK(c1.seed() != parent.seed());
  // A replayed split gives the identical stream.
  Rng c1_again = parent.split(1);
  for (int i = 0; i < 100; ++i) CHECK(c1.next_u64() == c1_again.next_u64());
}
