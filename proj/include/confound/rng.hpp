#pragma once

#include <cstddef>
#include <cstdint>

namespace confound {

/// Seed value used throughout the library. Any 64-bit value is valid.
using RngSeed = std::uint64_t;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent child seed for stream `index` of `master`.
/// Child streams depend only on (master, index), never on call order.
constexpr RngSeed derive_seed(RngSeed master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: the i-th output is mix64(key + i * golden),
/// where key = mix64(seed). Output is a pure function of (seed, i), so draws
/// replay bit-exactly on every platform. Distribution transforms are
/// implemented here rather than taken from <random>, whose distributions
/// are implementation-defined.
class Rng {
 public:
  explicit Rng(RngSeed seed) noexcept : key_(mix64(seed)) {}

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;

  /// Exponential with rate 1.
  double exponential() noexcept;

  /// Uniform integer in [0, bound) without modulo bias. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace confound
