#include "denseam/rng.hpp"

#include <cmath>
#include <numbers>

namespace denseam {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() noexcept {
  ++pos_;
  return mix64(seed_ + pos_ * kGamma);
}

double Rng::next_double() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() noexcept {
  // u1 in (0, 1] so the log is finite; u2 in [0, 1).
  const double u1 =
      static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split(std::uint64_t stream) const noexcept {
  // Two mixing rounds decorrelate the child from both the parent seed and
  // sibling streams.
  return Rng(mix64(mix64(seed_ ^ kGamma) + mix64(stream + 1) * kGamma));
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a + kGamma * mix64(b + kGamma));
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) noexcept {
  return hash_combine(hash_combine(a, b), c);
}

}  // namespace denseam
