#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prc/core.hpp"
#include "prc/prf.hpp"

namespace prc::sub {

enum class Profile : std::uint8_t { Theory = 0, Demo = 1 };

/// Parameters of the PRF-based binary zero-bit code.
///
/// A codeword carries m noisy PRF samples (x_j, F(x_j) xor e_j) of n+1 bits
/// each, padded with uniform filler to block length N >= (n+1)m, masked by z
/// and scattered by the key permutation.
struct SubParams {
  std::uint64_t n = 0;  ///< PRF input bits
  std::uint64_t m = 0;  ///< PRF samples per codeword
  std::uint64_t N = 0;  ///< block length
  double p = 0.0;       ///< target substitution rate
  double q = 0.0;       ///< PRF noise level
  Profile profile = Profile::Demo;

  std::uint64_t payload_length() const noexcept { return (n + 1) * m; }

  /// Accept iff W > m/2 + ln(m) sqrt(m).
  double threshold() const;

  void validate() const;
  bool operator==(const SubParams&) const = default;
};

/// Theory profile: m = ceil(C0 (1-2q)^-4 n^(4 log2(1/(1-2p)))), N = 3m(n+1)^2.
SubParams derive_params(std::uint64_t n, double p, double q, double c0);

/// Demo profile with caller-chosen m and N (must satisfy N >= (n+1)m).
SubParams demo_params(std::uint64_t n, std::uint64_t m, std::uint64_t N, double p, double q);

/// N = 3m(n+1)^2 with a caller-chosen m, the block length shape of the theory
/// profile at desk-scale m.
SubParams demo_params_full_block(std::uint64_t n, std::uint64_t m, double p, double q);

struct SubKey {
  prf::PrfKey prf_key;
  BitString z;
  Permutation pi;

  bool operator==(const SubKey&) const = default;
};

struct DecodeResult {
  bool accepted = false;
  std::uint64_t statistic = 0;  ///< W, the number of agreeing PRF samples
  double threshold = 0.0;
};

SubKey keygen(const SubParams& params, const prf::LocalPrfFamily& family, const Seed& seed);

BitString encode(const SubKey& key, const SubParams& params, const Seed& seed);
BitString encode(const SubKey& key, const SubParams& params, Rng& rng);

/// Throws LengthMismatch unless y has exactly N bits.
DecodeResult decode(const SubKey& key, const SubParams& params, const BitString& y);
DecodeResult decode(const SubKey& key, const SubParams& params, std::span<const Symbol> y);

/// Decoder state for a codeword that changes one bit at a time.
///
/// Starts from the all-zero input; flip(i) toggles input bit i and updates W in
/// O(tau) time, so scanning many nested windows costs O(1) per symbol.
class IncrementalDecoder {
 public:
  IncrementalDecoder(const SubKey& key, const SubParams& params);

  void flip(std::size_t position);
  std::uint64_t statistic() const noexcept { return statistic_; }
  bool accepts() const noexcept { return static_cast<double>(statistic_) > threshold_; }
  double threshold() const noexcept { return threshold_; }

 private:
  const SubKey* key_;
  std::uint64_t block_;  // n + 1
  std::uint64_t payload_;
  double threshold_;
  std::vector<std::uint8_t> unmasked_;  // (pi^-1 o y) xor z
  std::vector<std::uint8_t> agree_;
  std::uint64_t statistic_ = 0;
};

}  // namespace prc::sub
