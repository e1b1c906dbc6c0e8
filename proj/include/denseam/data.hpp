#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "denseam/linalg.hpp"
#include "denseam/parameterization.hpp"

namespace denseam {

enum class DataKind { isotropic, anisotropic_power_law, mnist_plaquette };

struct DataSpec {
  DataKind kind = DataKind::isotropic;
  double noise_std = 0.3;
  double exponent = 0.4;    // anisotropic power-law decay of D_ii
  int block = 1;            // MNIST plaquette block size j
  std::string mnist_dir;    // directory with the IDX files
};

struct Dataset {
  Matrix x;                 // N x P clean inputs
  Vector covariance_diag;   // D for the anisotropic law, empty otherwise
};

// Clean training inputs at the given dimensions. Isotropic: iid N(0,1).
// Anisotropic: columns ~ N(0, D) with D_ii proportional to i^{-exponent}
// and trace N. MNIST: loaded from IDX files, plaquette-downsampled, then
// per-pixel centered across the dataset.
Dataset generate(const DataSpec& spec, const Dims& dims, Rng& rng);

// Noisy inputs x + eps with eps ~ N(0, noise_std^2 I) drawn fresh on every
// call, paired with the clean targets.
std::pair<Matrix, Matrix> noisy_batch(const Dataset& data,
                                      std::span<const long> indices,
                                      double noise_std, Rng& rng);

// Plaquette coarse-graining of a 28x28 image (length-784 vector, row-major):
// each coarse pixel is the mean of its j x j block, with truncated blocks at
// the edges when j does not divide 28. Output dimension ceil(28/j)^2.
Vector plaquette_downsample(const Vector& image, int block);

// Applies the same linear map to a length-784 weight row, so rows transform
// consistently with the reduced data representation.
Vector project_weights(const Vector& w_row, int block);

long plaquette_dim(int block);

// Raw MNIST content: pixels scaled to [0,1], one image per column.
struct MnistImages {
  long count = 0;
  long rows = 0;
  long cols = 0;
  Matrix pixels;                 // (rows*cols) x count
  std::vector<unsigned char> labels;  // empty if no label file was read
};

// IDX readers. Throw std::runtime_error naming the offending file, the bad
// magic value, or the expected vs actual byte count.
MnistImages load_mnist_idx(const std::string& images_path,
                           const std::string& labels_path = "");

// Canonical distribution file names, used by the loaders and the CLI helper.
extern const char* const kMnistImagesFile;
extern const char* const kMnistLabelsFile;
extern const char* const kMnistCanonicalUrls[2];

}  // namespace denseam
