#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prc/core.hpp"
#include "prc/substitution_code.hpp"

namespace prc::idx {

/// Parameters of the indexing code wrapped around a binary code of block
/// length n = inner.N: codewords have m_out = ceil(ln(2) n) symbols over an
/// alphabet of q_out = rho n symbols.
struct IdxParams {
  sub::SubParams inner;
  std::uint32_t rho = 0;
  std::uint64_t m_out = 0;
  std::uint64_t q_out = 0;

  static IdxParams make(const sub::SubParams& inner, std::uint32_t rho);

  std::uint64_t inner_length() const noexcept { return inner.N; }
  void validate() const;
  bool operator==(const IdxParams&) const = default;
};

/// Inner key plus the balanced map psi : [q_out] -> [n] with every fiber of
/// size exactly rho. Fibers are indexed at construction.
class IdxKey {
 public:
  IdxKey() = default;
  /// Throws InvalidParams unless psi is balanced.
  IdxKey(sub::SubKey inner_key, std::vector<Symbol> psi, std::uint64_t inner_length);

  const sub::SubKey& inner_key() const noexcept { return inner_key_; }
  std::span<const Symbol> psi() const noexcept { return psi_; }
  std::uint32_t rho() const noexcept { return rho_; }
  /// The rho symbols a with psi(a) = j.
  std::span<const Symbol> fiber(Symbol j) const noexcept {
    return {fibers_.data() + static_cast<std::size_t>(j) * rho_, rho_};
  }

  bool operator==(const IdxKey& o) const {
    return inner_key_ == o.inner_key_ && psi_ == o.psi_;
  }

 private:
  sub::SubKey inner_key_;
  std::vector<Symbol> psi_;
  std::vector<Symbol> fibers_;
  std::uint32_t rho_ = 0;
};

IdxKey keygen_idx(const IdxParams& params, const prf::LocalPrfFamily& family, const Seed& seed);

/// Rewrites a uniform string y1 in [n]^m so that its set of distinct symbols
/// is pulled onto support(y0), matching the two set differences with a
/// uniformly random injection.
SymbolString perturb_difference(std::uint64_t n, std::uint64_t m, const BitString& y0, Rng& rng);
SymbolString perturb_difference(std::uint64_t n, std::uint64_t m, const BitString& y0,
                                const Seed& seed);

SymbolString encode_idx(const IdxKey& key, const IdxParams& params, const Seed& seed);
SymbolString encode_idx(const IdxKey& key, const IdxParams& params, Rng& rng);

/// D_psi(z): bit i set iff some symbol of z lies in psi^-1(i). z may have any
/// length. Throws SymbolOutOfRange for symbols outside [q_out].
BitString project(std::span<const Symbol> psi, std::uint64_t n, std::span<const Symbol> z);

sub::DecodeResult decode_idx(const IdxKey& key, const IdxParams& params, const SymbolString& z);
sub::DecodeResult decode_idx(const IdxKey& key, const IdxParams& params, std::span<const Symbol> z);

/// |Unique(z)| within q(1 - exp(-m/q)) +- 2 sqrt(m) ln m.
bool is_typical(const SymbolString& z, std::uint64_t q, std::uint64_t m);

/// Decodes every prefix of a growing window in O(tau) per appended symbol.
/// clear() returns to the empty window in time proportional to the symbols
/// seen since the last clear.
class WindowDecoder {
 public:
  WindowDecoder(const IdxKey& key, const IdxParams& params);

  void push(Symbol s);
  void clear();

  std::uint64_t statistic() const noexcept { return inner_.statistic(); }
  bool accepts() const noexcept { return inner_.accepts(); }
  double threshold() const noexcept { return inner_.threshold(); }

 private:
  const IdxKey* key_;
  std::uint64_t q_out_;
  sub::IncrementalDecoder inner_;
  std::vector<std::uint32_t> counts_;
  std::vector<Symbol> touched_;
};

}  // namespace prc::idx
