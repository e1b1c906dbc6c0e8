#pragma once

#include <Eigen/Dense>
#include <vector>

#include "denseam/rng.hpp"

namespace denseam {

// Dense row-major matrix of 64-bit reals. All model quantities (W, G, Z, S,
// F, R) live in this type; 64-bit precision throughout so spectral
// diagnostics are not confounded by rounding.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Matrix product with optional transposes. Dimensions are checked; the
// accumulation order is the one fixed by Eigen's blocked product kernel and
// is deterministic for a given binary (single-threaded evaluation).
Matrix gemm(const Matrix& a, const Matrix& b, bool transpose_a = false,
            bool transpose_b = false);

// rows x cols matrix of iid N(0, std^2) entries, filled in row-major order.
// Advances `rng` by exactly 2*rows*cols uniform draws.
Matrix sample_gaussian(Rng& rng, Index rows, Index cols, double std);
Vector sample_gaussian_vector(Rng& rng, Index n, double std);

// k largest eigenvalues of a symmetric matrix, in descending order.
// Throws std::invalid_argument if the input is not symmetric (tolerance
// 1e-10 relative to the largest entry, at least 1e-10 absolute) or k exceeds
// the dimension. Full dense solve; the matrices here are desk scale.
std::vector<double> sym_top_eigs(const Matrix& m, int k);

}  // namespace denseam
