#include "denseam/activation.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace denseam {
namespace {

// (2p-1)!! in exact integer arithmetic. p <= 16 stays within uint64.
std::uint64_t odd_double_factorial(int p) {
  if (p < 0 || p > 16) {
    throw std::invalid_argument("relu power out of supported range [0,16]");
  }
  std::uint64_t r = 1;
  for (int j = 3; j <= 2 * p - 1; j += 2) r *= static_cast<std::uint64_t>(j);
  return r;
}

// (p-1)!! with (-1)!! = 0!! = 1.
std::uint64_t double_factorial(int n) {
  std::uint64_t r = 1;
  for (int j = n; j >= 2; j -= 2) r *= static_cast<std::uint64_t>(j);
  return r;
}

}  // namespace

ActivationKind ActivationKind::linear() { return ActivationKind{}; }

ActivationKind ActivationKind::relu(int p) {
  if (p < 1) throw std::invalid_argument("relu power must be >= 1");
  ActivationKind a;
  a.type = ActivationType::relu_p;
  a.p = p;
  a.norm_const = relu_norm_constant(p);
  return a;
}

ActivationKind ActivationKind::softmax(double beta) {
  if (!(beta > 0)) throw std::invalid_argument("softmax beta must be > 0");
  ActivationKind a;
  a.type = ActivationType::softmax;
  a.beta = beta;
  return a;
}

const char* ActivationKind::name() const {
  switch (type) {
    case ActivationType::linear: return "linear";
    case ActivationType::relu_p: return "relu";
    case ActivationType::softmax: return "softmax";
  }
  return "?";
}

double relu_norm_constant(int p) {
  return std::sqrt(0.5 * static_cast<double>(odd_double_factorial(p)));
}

double activation_mean(const ActivationKind& act) {
  switch (act.type) {
    case ActivationType::linear:
      return 0.0;
    case ActivationType::relu_p: {
      const double half_abs_moment =
          0.5 * static_cast<double>(double_factorial(act.p - 1)) *
          (act.p % 2 == 1 ? std::sqrt(2.0 / std::numbers::pi) : 1.0);
      return act.norm_const * half_abs_moment;
    }
    case ActivationType::softmax:
      throw std::invalid_argument("activation_mean: softmax is not elementwise");
  }
  return 0.0;
}

void apply_elementwise(const ActivationKind& act, const Matrix& z, Matrix& s,
                       Matrix* sprime) {
  const Index rows = z.rows(), cols = z.cols();
  s.resize(rows, cols);
  if (sprime) sprime->resize(rows, cols);
  const Index n = rows * cols;
  const double* zp = z.data();
  double* sp = s.data();
  double* dp = sprime ? sprime->data() : nullptr;
  switch (act.type) {
    case ActivationType::linear:
      s = z;
      if (dp) sprime->setOnes();
      return;
    case ActivationType::relu_p: {
      const double cp = act.norm_const;
      const int p = act.p;
      for (Index i = 0; i < n; ++i) {
        const double x = zp[i];
        if (x <= 0) {
          sp[i] = 0;
          if (dp) dp[i] = 0;
        } else if (p == 1) {
          sp[i] = cp * x;
          if (dp) dp[i] = cp;
        } else {
          const double xm = std::pow(x, p - 1);
          sp[i] = cp * xm * x;
          if (dp) dp[i] = cp * p * xm;
        }
      }
      return;
    }
    case ActivationType::softmax:
      throw std::invalid_argument("apply_elementwise: softmax is not elementwise");
  }
}

Matrix softmax_columns(const Matrix& z, double beta) {
  Matrix s(z.rows(), z.cols());
  for (Index col = 0; col < z.cols(); ++col) {
    const double zmax = z.col(col).maxCoeff();
    double total = 0;
    for (Index row = 0; row < z.rows(); ++row) {
      const double e = std::exp(beta * (z(row, col) - zmax));
      s(row, col) = e;
      total += e;
    }
    s.col(col) /= total;
  }
  return s;
}

Vector softmax_jacobian_apply(const Vector& sigma, const Vector& v,
                              double beta) {
  const double dot = sigma.dot(v);
  return beta * (sigma.cwiseProduct(v) - dot * sigma);
}

double hidden_lagrangian(const ActivationKind& act, const Vector& h,
                         double s1) {
  switch (act.type) {
    case ActivationType::linear:
      return h.squaredNorm() / (2.0 * s1);
    case ActivationType::relu_p: {
      double total = 0;
      for (Index i = 0; i < h.size(); ++i) {
        const double x = std::max(h[i], 0.0);
        total += act.norm_const * std::pow(x, act.p + 1) / (act.p + 1);
      }
      return total / s1;
    }
    case ActivationType::softmax: {
      const double hmax = h.maxCoeff();
      double total = 0;
      for (Index i = 0; i < h.size(); ++i) {
        total += std::exp(act.beta * (h[i] - hmax));
      }
      return (hmax + std::log(total) / act.beta) / s1;
    }
  }
  return 0;
}

}  // namespace denseam
