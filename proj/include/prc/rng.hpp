#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace prc {

/// 64-bit FNV-1a, used to fold stream labels into seeds and to hash configs.
constexpr std::uint64_t fnv1a64(std::string_view s,
                                std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// A (value, stream-label) pair naming one reproducible random stream.
///
/// Streams are split by deriving child seeds; two seeds with the same value and
/// label always produce the same stream, and children with different labels or
/// indices are statistically independent streams.
struct Seed {
  std::uint64_t value = 0;
  std::string label;

  Seed() = default;
  Seed(std::uint64_t v, std::string l = {}) : value(v), label(std::move(l)) {}

  Seed derive(std::string_view sublabel) const {
    return Seed(mix64(value ^ fnv1a64(sublabel, fnv1a64(label))), label + "/" + std::string(sublabel));
  }
  Seed derive(std::uint64_t index) const {
    return Seed(mix64(value + 0x9e3779b97f4a7c15ULL * (index + 1)) ^ fnv1a64(label),
                label + "#" + std::to_string(index));
  }

  bool operator==(const Seed&) const = default;
};

/// Counter-based generator: the i-th output is mix64(key + i * gamma).
///
/// Satisfies std::uniform_random_bit_generator, but the library only uses its
/// own integer/real helpers below so streams are bit-identical across
/// standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const Seed& seed)
      : key_(mix64(seed.value ^ fnv1a64(seed.label) ^ 0x243f6a8885a308d3ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }

  std::uint64_t next() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform integer in [0, n), n >= 1 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace prc
