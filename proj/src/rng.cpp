#include "wingit/rng.hpp"

namespace wingit {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Seed derive_seed(Seed base, std::uint64_t n, std::uint64_t trial) noexcept {
  // Each stage is a bijection of its input for the other arguments fixed.
  std::uint64_t h = mix64(base.value + kGolden);
  h = mix64(h ^ (n * kGolden));
  h = mix64(h ^ mix64(trial + 0x632BE59BD9B4E019ULL));
  return Seed{h};
}

std::uint64_t CounterRng::at(std::uint64_t counter) const noexcept {
  return mix64(key_ + (counter + 1) * kGolden);
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<uint128>(next_u64()) * bound) >> 64);
}

}  // namespace wingit
