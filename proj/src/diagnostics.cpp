#include "denseam/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace denseam {

std::pair<double, double> gram_spike_bulk(const Matrix& s) {
  const Matrix gram =
      (s.transpose() * s) / static_cast<double>(s.rows());
  const auto eigs = sym_top_eigs(gram, gram.rows() >= 2 ? 2 : 1);
  return {eigs[0], eigs.size() > 1 ? eigs[1] : 0.0};
}

double participation_ratio(const Vector& sigma) {
  return 1.0 / sigma.squaredNorm();
}

double participation_ratio_centered(const Vector& sigma) {
  const double norm2 = center(sigma).squaredNorm();
  if (norm2 == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / norm2;
}

DiagnosticsRecord desiderata_probe(const ModelState& model,
                                   const BatchTensors& batch,
                                   const UpdateDecomposition& decomposition) {
  DiagnosticsRecord rec;
  rec.mse = mse_loss(batch.F, batch.F - batch.R);
  rec.mse_per_dim = rec.mse / static_cast<double>(batch.F.rows());
  const Matrix s_visible =
      model.centered ? Matrix(center(batch.S)) : batch.S;
  auto [lmax, l2] = gram_spike_bulk(s_visible);
  rec.lambda_max = lmax;
  rec.lambda2 = l2;
  rec.lambda_max_raw = lmax * static_cast<double>(s_visible.rows());
  rec.lambda2_raw = l2 * static_cast<double>(s_visible.rows());
  if (model.activation.type == ActivationType::softmax) {
    double keff = 0, keffc = 0;
    const Index bsz = batch.S.cols();
    for (Index mu = 0; mu < bsz; ++mu) {
      keff += participation_ratio(batch.S.col(mu));
      keffc += participation_ratio_centered(batch.S.col(mu));
    }
    rec.k_eff = keff / static_cast<double>(bsz);
    rec.k_eff_centered = keffc / static_cast<double>(bsz);
  }
  rec.rms_z = rms(batch.Z);
  rec.rms_f = rms(batch.F);
  rec.rms_dw1 = rms(decomposition.dW1);
  rec.rms_dw2 = rms(decomposition.dW2);
  rec.rms_dz1 = rms(decomposition.dZ1);
  rec.rms_dz2 = rms(decomposition.dZ2);
  rec.rms_df11 = rms(decomposition.dF11);
  rec.rms_df12 = rms(decomposition.dF12);
  rec.rms_df21 = rms(decomposition.dF21);
  rec.rms_df22 = rms(decomposition.dF22);
  rec.rms_db = rms(decomposition.dB);
  rec.rms_dc = rms(decomposition.dC);
  return rec;
}

}  // namespace denseam
