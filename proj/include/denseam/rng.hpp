#pragma once

#include <cstdint>

namespace denseam {

// Counter-based deterministic random stream.
//
// Every draw is a pure function of (seed, position): the core generator is
// SplitMix64, whose n-th output is mix(seed + n * golden_gamma). This makes
// streams replayable bit-for-bit from (seed, position) alone and lets the
// sweep harness derive an independent child stream per experiment cell via
// split() without coordinating state.
//
// A single stream must be owned by one thread; clone or split() to fork.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept;

  // Uniform on [0, 1) with 53 random bits.
  double next_double() noexcept;

  // Standard normal via Box-Muller (cosine branch only, so the state stays
  // just (seed, position)). Consumes exactly two uniforms.
  double next_gaussian() noexcept;

  // Derives an independent stream keyed by `stream`. Children of distinct
  // keys, and the parent itself, do not overlap.
  Rng split(std::uint64_t stream) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return pos_; }

 private:
  std::uint64_t seed_;
  std::uint64_t pos_ = 0;
};

// Order-independent key mixing for naming derived streams.
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept;
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept;

}  // namespace denseam
