#pragma once

#include <cstdint>

namespace wingit {

__extension__ typedef unsigned __int128 uint128;

/// Seed for every stochastic routine in the library.
struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// SplitMix64 finalizer. Bijective on 64-bit words.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Combines (base, n, trial) into a per-trial seed.
[[nodiscard]] Seed derive_seed(Seed base, std::uint64_t n, std::uint64_t trial) noexcept;

/// Counter-based generator: draw k of stream `key` is mix64(key + (k + 1) * golden).
///
/// Output depends only on (key, counter), never on platform or library
/// version, so trajectories are reproducible everywhere. `at()` gives
/// random access into the stream.
class CounterRng {
 public:
  explicit CounterRng(Seed seed) noexcept : key_(seed.value) {}

  [[nodiscard]] std::uint64_t next_u64() noexcept { return at(counter_++); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  [[nodiscard]] double next_unit() noexcept { return to_unit(next_u64()); }

  /// Uniform integer in [0, bound) by 64x64 multiply-shift (bias < bound / 2^64).
  [[nodiscard]] std::uint64_t next_below(std::uint64_t bound) noexcept;

  [[nodiscard]] std::uint64_t at(std::uint64_t counter) const noexcept;
  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

  [[nodiscard]] static double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace wingit
