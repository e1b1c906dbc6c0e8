#include "denseam/parameterization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace denseam {

ScalingRegime ScalingRegime::proportional(double kappa, double rho,
                                          double beta) {
  if (!(kappa > 0) || !(rho > 0) || !(beta > 0)) {
    throw std::invalid_argument("proportional regime ratios must be positive");
  }
  ScalingRegime r;
  r.kind = RegimeKind::proportional;
  r.kappa = kappa;
  r.rho = rho;
  r.beta = beta;
  return r;
}

ScalingRegime ScalingRegime::k_only(long n, long p, double beta) {
  if (n < 1 || p < 1 || !(beta > 0)) {
    throw std::invalid_argument("k_only regime requires N, P >= 1 and beta > 0");
  }
  ScalingRegime r;
  r.kind = RegimeKind::k_only;
  r.n_fixed = n;
  r.p_fixed = p;
  r.beta = beta;
  return r;
}

namespace {

long ceil_positive(double x) {
  return static_cast<long>(std::ceil(x));
}

}  // namespace

Dims dims_for(const ScalingRegime& regime, long scale) {
  if (scale < 1) throw std::invalid_argument("dims_for: scale must be >= 1");
  Dims d;
  if (regime.kind == RegimeKind::proportional) {
    d.n = scale;
    d.k = ceil_positive(regime.kappa * static_cast<double>(scale));
    d.p = ceil_positive(regime.rho * static_cast<double>(scale));
  } else {
    d.n = regime.n_fixed;
    d.p = regime.p_fixed;
    d.k = scale;
  }
  d.b = ceil_positive(regime.beta * static_cast<double>(d.p));
  if (d.b < 1) throw std::invalid_argument("dims_for: batch size rounded to zero");
  if (d.b > d.p) d.b = d.p;
  return d;
}

const char* optimizer_name(OptimizerKind opt) {
  return opt == OptimizerKind::sgd ? "sgd" : "adam";
}

ScalingRule scaling_rule(const ScalingRegime& regime,
                         const ActivationKind& activation, OptimizerKind opt,
                         bool softmax_sgd_override) {
  const bool proportional = regime.kind == RegimeKind::proportional;
  ScalingRule rule;
  if (activation.type == ActivationType::softmax) {
    if (opt == OptimizerKind::sgd) {
      if (!softmax_sgd_override) {
        throw std::invalid_argument(
            "softmax with SGD has no transfer prescription: the softmax row "
            "gradient is proportional to the row's own activation weight, so "
            "SGD amplifies concentration and destabilizes large models; use "
            "Adam or pass the explicit softmax-SGD override");
      }
      if (proportional) {
        rule.s2_exp_k = 0.5;
        rule.provenance = "override/proportional/softmax/sgd";
      } else {
        rule.s2_exp_n = 0.5;
        rule.provenance = "override/k_only/softmax/sgd";
      }
      rule.etaw_exp_k = 1.0;
      return rule;
    }
    if (proportional) {
      rule.s2_exp_k = 0.5;
      rule.provenance = "table1/proportional/softmax/adam";
    } else {
      rule.provenance = "table1/k_only/softmax/adam";
    }
    return rule;
  }
  // Linear inherits the ReLU^p rows.
  rule.s2_exp_k = proportional ? -0.5 : -1.0;
  rule.etaw_exp_k = opt == OptimizerKind::sgd ? 1.0 : 0.0;
  rule.provenance = std::string("table1/") +
                    (proportional ? "proportional/" : "k_only/") +
                    "relup/" + optimizer_name(opt);
  return rule;
}

Prescription prescription(const ScalingRegime& regime,
                          const ActivationKind& activation, OptimizerKind opt,
                          const Dims& dims, double eta0, double etaB0,
                          double etaC0, bool softmax_sgd_override, double s10,
                          double s20) {
  const ScalingRule rule =
      scaling_rule(regime, activation, opt, softmax_sgd_override);
  const double n = static_cast<double>(dims.n);
  const double k = static_cast<double>(dims.k);
  Prescription pr;
  pr.s1 = s10 * std::pow(n, rule.s1_exp_n) * std::pow(k, rule.s1_exp_k);
  pr.s2 = s20 * std::pow(n, rule.s2_exp_n) * std::pow(k, rule.s2_exp_k);
  pr.etaW = eta0 * std::pow(k, rule.etaw_exp_k);
  pr.etaB = std::isnan(etaB0) ? eta0 : etaB0;
  pr.etaC = std::isnan(etaC0) ? eta0 : etaC0;
  pr.provenance = rule.provenance;
  return pr;
}

}  // namespace denseam
