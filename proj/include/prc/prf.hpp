#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prc/core.hpp"

namespace prc::prf {

enum class FamilyKind : std::uint8_t {
  SparseParity = 1,
  MajorityParity = 2,
  LookupTable = 3,
};

/// ceil(log2 n): the largest locality admitted for n-bit inputs.
std::uint32_t max_locality(std::uint32_t input_len) noexcept;

/// A tau-local weak-PRF family over n-bit inputs with output noise level q.
struct LocalPrfFamily {
  std::uint32_t input_len = 0;
  std::uint32_t locality = 0;
  double noise_level = 0.0;
  FamilyKind kind = FamilyKind::SparseParity;

  /// Throws InvalidFamily unless tau <= ceil(log2 n), 0 <= q < 1/2, and
  /// (for majority-parity) tau is even and positive.
  void validate() const;
  bool operator==(const LocalPrfFamily&) const = default;
};

/// One function F_s of a family: F_s(x) = G(x restricted to `support`).
///
/// For majority-parity the first `majority_size` support indices form S1 and
/// the rest form S2; G = Majority(S1) xor Parity(S2), where Majority is 1 iff
/// strictly more than half of its inputs are 1.
class PrfKey {
 public:
  PrfKey() = default;

  static PrfKey sparse_parity(std::uint32_t input_len, std::vector<std::uint32_t> support,
                              double noise_level);
  static PrfKey majority_parity(std::uint32_t input_len, std::vector<std::uint32_t> s1,
                                std::vector<std::uint32_t> s2, double noise_level);
  static PrfKey lookup_table(std::uint32_t input_len, std::vector<std::uint32_t> support,
                             std::vector<std::uint8_t> table, double noise_level);

  const LocalPrfFamily& family() const noexcept { return family_; }
  std::span<const std::uint32_t> support() const noexcept { return support_; }
  std::uint32_t majority_size() const noexcept { return majority_size_; }
  std::span<const std::uint8_t> table() const noexcept { return table_; }

  /// F_s(x) for a bit vector of length n (any integral element type).
  template <class Bit>
  int eval_bits(std::span<const Bit> x) const {
    switch (family_.kind) {
      case FamilyKind::SparseParity: {
        unsigned acc = 0;
        for (auto i : support_) acc ^= static_cast<unsigned>(x[i]) & 1u;
        return static_cast<int>(acc);
      }
      case FamilyKind::MajorityParity: {
        std::uint32_t ones = 0;
        for (std::uint32_t k = 0; k < majority_size_; ++k) ones += static_cast<unsigned>(x[support_[k]]) & 1u;
        unsigned acc = 2 * ones > majority_size_ ? 1u : 0u;
        for (std::size_t k = majority_size_; k < support_.size(); ++k) acc ^= static_cast<unsigned>(x[support_[k]]) & 1u;
        return static_cast<int>(acc);
      }
      case FamilyKind::LookupTable: {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < support_.size(); ++k) idx |= (static_cast<std::size_t>(x[support_[k]]) & 1u) << k;
        return table_[idx];
      }
    }
    return 0;
  }

  int eval(const BitString& x) const;
  int eval_noisy(const BitString& x, const Seed& seed) const;
  int eval_noisy(const BitString& x, Rng& rng) const;

  bool operator==(const PrfKey&) const = default;

 private:
  void check_input(const BitString& x) const;

  LocalPrfFamily family_;
  std::vector<std::uint32_t> support_;
  std::uint32_t majority_size_ = 0;
  std::vector<std::uint8_t> table_;
};

PrfKey sample_key(const LocalPrfFamily& family, const Seed& seed);
PrfKey sample_key(const LocalPrfFamily& family, Rng& rng);

}  // namespace prc::prf
