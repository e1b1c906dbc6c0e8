#include "denseam/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace denseam {

const char* const kMnistImagesFile = "train-images-idx3-ubyte";
const char* const kMnistLabelsFile = "train-labels-idx1-ubyte";
const char* const kMnistCanonicalUrls[2] = {
    "https://ossci-datasets.s3.amazonaws.com/mnist/train-images-idx3-ubyte.gz",
    "https://ossci-datasets.s3.amazonaws.com/mnist/train-labels-idx1-ubyte.gz"};

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be_u32(std::istream& in, const std::string& path) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) {
    throw std::runtime_error(path + ": truncated IDX header");
  }
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

std::vector<unsigned char> read_payload(std::istream& in,
                                        const std::string& path,
                                        std::size_t expected) {
  std::vector<unsigned char> bytes(expected);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(expected));
  const std::size_t got = static_cast<std::size_t>(in.gcount());
  if (got != expected) {
    throw std::runtime_error(path + ": truncated payload, expected " +
                             std::to_string(expected) + " bytes but found " +
                             std::to_string(got));
  }
  return bytes;
}

}  // namespace

Dataset generate(const DataSpec& spec, const Dims& dims, Rng& rng) {
  Dataset data;
  switch (spec.kind) {
    case DataKind::isotropic:
      data.x = sample_gaussian(rng, dims.n, dims.p, 1.0);
      return data;
    case DataKind::anisotropic_power_law: {
      Vector d(dims.n);
      for (Index i = 0; i < dims.n; ++i) {
        d[i] = std::pow(static_cast<double>(i + 1), -spec.exponent);
      }
      d *= static_cast<double>(dims.n) / d.sum();  // trace N
      data.covariance_diag = d;
      data.x = sample_gaussian(rng, dims.n, dims.p, 1.0);
      data.x.array().colwise() *= d.array().sqrt();
      return data;
    }
    case DataKind::mnist_plaquette: {
      const std::string dir = spec.mnist_dir.empty() ? "." : spec.mnist_dir;
      const MnistImages mnist =
          load_mnist_idx(dir + "/" + kMnistImagesFile);
      const long nj = plaquette_dim(spec.block);
      if (dims.n != nj) {
        throw std::invalid_argument(
            "mnist dataset: dims.n = " + std::to_string(dims.n) +
            " does not match the block-" + std::to_string(spec.block) +
            " plaquette dimension " + std::to_string(nj));
      }
      if (dims.p > mnist.count) {
        throw std::invalid_argument(
            "mnist dataset: requested P = " + std::to_string(dims.p) +
            " exceeds the " + std::to_string(mnist.count) +
            " available images");
      }
      data.x.resize(nj, dims.p);
      for (Index mu = 0; mu < dims.p; ++mu) {
        data.x.col(mu) = plaquette_downsample(mnist.pixels.col(mu), spec.block);
      }
      // Per-pixel centering across the dataset.
      data.x.colwise() -= Vector(data.x.rowwise().mean());
      return data;
    }
  }
  throw std::logic_error("generate: unknown data kind");
}

std::pair<Matrix, Matrix> noisy_batch(const Dataset& data,
                                      std::span<const long> indices,
                                      double noise_std, Rng& rng) {
  const Index n = data.x.rows();
  Matrix clean(n, static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const long idx = indices[j];
    if (idx < 0 || idx >= data.x.cols()) {
      throw std::invalid_argument("noisy_batch: index out of range");
    }
    clean.col(static_cast<Index>(j)) = data.x.col(idx);
  }
  Matrix noisy = clean;
  if (noise_std > 0) {
    noisy += sample_gaussian(rng, noisy.rows(), noisy.cols(), noise_std);
  }
  return {std::move(noisy), std::move(clean)};
}

long plaquette_dim(int block) {
  if (block < 1 || block > 28) {
    throw std::invalid_argument("plaquette block must be in [1, 28]");
  }
  const long side = (28 + block - 1) / block;
  return side * side;
}

Vector plaquette_downsample(const Vector& image, int block) {
  if (image.size() != 784) {
    throw std::invalid_argument("plaquette_downsample expects a 28x28 image");
  }
  const long side = (28 + block - 1) / block;
  Vector out(side * side);
  for (long br = 0; br < side; ++br) {
    for (long bc = 0; bc < side; ++bc) {
      double total = 0;
      long count = 0;
      for (long r = br * block; r < std::min<long>((br + 1) * block, 28); ++r) {
        for (long c = bc * block; c < std::min<long>((bc + 1) * block, 28); ++c) {
          total += image[r * 28 + c];
          ++count;
        }
      }
      out[br * side + bc] = total / static_cast<double>(count);
    }
  }
  return out;
}

Vector project_weights(const Vector& w_row, int block) {
  return plaquette_downsample(w_row, block);
}

MnistImages load_mnist_idx(const std::string& images_path,
                           const std::string& labels_path) {
  std::ifstream in(images_path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(images_path + ": cannot open file");
  }
  const std::uint32_t magic = read_be_u32(in, images_path);
  if (magic != kImagesMagic) {
    throw std::runtime_error(images_path + ": bad magic 0x" +
                             [&] {
                               char buf[16];
                               std::snprintf(buf, sizeof buf, "%08x", magic);
                               return std::string(buf);
                             }() +
                             ", expected 0x00000803");
  }
  MnistImages out;
  out.count = read_be_u32(in, images_path);
  out.rows = read_be_u32(in, images_path);
  out.cols = read_be_u32(in, images_path);
  const std::size_t expected = static_cast<std::size_t>(out.count) *
                               static_cast<std::size_t>(out.rows) *
                               static_cast<std::size_t>(out.cols);
  const std::vector<unsigned char> bytes =
      read_payload(in, images_path, expected);
  out.pixels.resize(out.rows * out.cols, out.count);
  for (long img = 0; img < out.count; ++img) {
    const std::size_t base =
        static_cast<std::size_t>(img) * static_cast<std::size_t>(out.rows) *
        static_cast<std::size_t>(out.cols);
    for (long px = 0; px < out.rows * out.cols; ++px) {
      out.pixels(px, img) =
          static_cast<double>(bytes[base + static_cast<std::size_t>(px)]) /
          255.0;
    }
  }
  if (!labels_path.empty()) {
    std::ifstream lin(labels_path, std::ios::binary);
    if (!lin) {
      throw std::runtime_error(labels_path + ": cannot open file");
    }
    const std::uint32_t lmagic = read_be_u32(lin, labels_path);
    if (lmagic != kLabelsMagic) {
      throw std::runtime_error(labels_path + ": bad magic, expected 0x00000801");
    }
    const std::uint32_t count = read_be_u32(lin, labels_path);
    if (count != static_cast<std::uint32_t>(out.count)) {
      throw std::runtime_error(labels_path + ": label count " +
                               std::to_string(count) +
                               " does not match image count " +
                               std::to_string(out.count));
    }
    out.labels = read_payload(lin, labels_path, count);
  }
  return out;
}

}  // namespace denseam
