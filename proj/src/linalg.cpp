#include "denseam/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace denseam {

Matrix gemm(const Matrix& a, const Matrix& b, bool transpose_a,
            bool transpose_b) {
  const Index ar = transpose_a ? a.cols() : a.rows();
  const Index ac = transpose_a ? a.rows() : a.cols();
  const Index br = transpose_b ? b.cols() : b.rows();
  const Index bc = transpose_b ? b.rows() : b.cols();
  if (ac != br) {
    throw std::invalid_argument(
        "gemm: inner dimensions disagree: " + std::to_string(ar) + "x" +
        std::to_string(ac) + " * " + std::to_string(br) + "x" +
        std::to_string(bc));
  }
  if (transpose_a && transpose_b) return a.transpose() * b.transpose();
  if (transpose_a) return a.transpose() * b;
  if (transpose_b) return a * b.transpose();
  return a * b;
}

Matrix sample_gaussian(Rng& rng, Index rows, Index cols, double std) {
  if (std < 0) throw std::invalid_argument("sample_gaussian: std < 0");
  Matrix m(rows, cols);
  double* p = m.data();
  const Index n = rows * cols;
  for (Index i = 0; i < n; ++i) p[i] = std * rng.next_gaussian();
  return m;
}

Vector sample_gaussian_vector(Rng& rng, Index n, double std) {
  if (std < 0) throw std::invalid_argument("sample_gaussian: std < 0");
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = std * rng.next_gaussian();
  return v;
}

std::vector<double> sym_top_eigs(const Matrix& m, int k) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("sym_top_eigs: matrix is not square");
  }
  if (k < 0 || k > m.rows()) {
    throw std::invalid_argument("sym_top_eigs: k out of range");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double tol = std::max(1e-10, 1e-10 * scale);
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    throw std::invalid_argument("sym_top_eigs: input not symmetric, max |a_ij - a_ji| = " +
                                std::to_string(asym));
  }
  // Symmetrize so the solver sees an exactly self-adjoint operand.
  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_top_eigs: eigensolver failed to converge");
  }
  const auto& evs = solver.eigenvalues();  // ascending
  std::vector<double> top(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) top[static_cast<std::size_t>(i)] = evs[m.rows() - 1 - i];
  return top;
}

}  // namespace denseam
