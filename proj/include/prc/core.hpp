#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prc/error.hpp"
#include "prc/rng.hpp"

namespace prc {

using Symbol = std::uint32_t;

/// Symbols 0..size-1.
class Alphabet {
 public:
  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 32;

  constexpr Alphabet() = default;
  explicit Alphabet(std::uint64_t size);

  static Alphabet binary() { return Alphabet(2); }

  std::uint64_t size() const noexcept { return size_; }
  bool contains(Symbol s) const noexcept { return s < size_; }

  bool operator==(const Alphabet&) const = default;

 private:
  std::uint64_t size_ = 2;
};

/// A sequence of symbols over a fixed alphabet. BitString is the size-2 case.
class SymbolString {
 public:
  SymbolString() = default;
  explicit SymbolString(Alphabet alphabet) : alphabet_(alphabet) {}
  SymbolString(Alphabet alphabet, std::vector<Symbol> symbols);

  /// Skips the range check; for hot paths whose symbols are in range by construction.
  static SymbolString trusted(Alphabet alphabet, std::vector<Symbol> symbols) {
    SymbolString s(alphabet);
    s.symbols_ = std::move(symbols);
    return s;
  }
  static SymbolString filled(Alphabet alphabet, std::size_t length, Symbol value = 0);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }

  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  const std::vector<Symbol>& vector() const noexcept { return symbols_; }
  std::vector<Symbol> release() && { return std::move(symbols_); }

  auto begin() const noexcept { return symbols_.begin(); }
  auto end() const noexcept { return symbols_.end(); }

  SymbolString substr(std::size_t begin, std::size_t end) const;

  bool operator==(const SymbolString&) const = default;

 private:
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

using BitString = SymbolString;

/// Bijection on [0, n), stored with its inverse.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> forward);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return forward_.size(); }
  std::uint32_t operator()(std::size_t i) const { return forward_[i]; }
  std::span<const std::uint32_t> forward() const noexcept { return forward_; }
  std::span<const std::uint32_t> inverse_map() const noexcept { return inverse_; }
  Permutation inverse() const;

  bool operator==(const Permutation& o) const { return forward_ == o.forward_; }

 private:
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> inverse_;
};

std::size_t hamming_distance(const SymbolString& a, const SymbolString& b);

/// Unit-cost Levenshtein distance, O(|a||b|) time and O(min) space.
std::size_t edit_distance(const SymbolString& a, const SymbolString& b);

/// Returns min(edit_distance(a, b), bound + 1) using a diagonal band of width
/// 2*bound+1, so auditing a budget on long strings costs O((|a|+|b|) * bound).
std::size_t edit_distance_capped(const SymbolString& a, const SymbolString& b,
                                 std::size_t bound);

/// Fisher-Yates uniform permutation of [0, n).
Permutation random_permutation(std::size_t n, const Seed& seed);
Permutation random_permutation(std::size_t n, Rng& rng);

/// output[i] = x[pi(i)].
SymbolString apply_permutation(const Permutation& pi, const SymbolString& x);

/// Partial Fisher-Yates: k distinct uniform indices from [0, n) in draw order.
std::vector<std::uint32_t> sample_distinct(std::size_t n, std::size_t k, Rng& rng);

/// Decimal symbols separated by single spaces.
std::string to_text(const SymbolString& s);

/// Parses whitespace-separated decimal symbols. For a binary alphabet a single
/// run of contiguous 0/1 characters (e.g. "0110") is accepted as well.
SymbolString parse_symbols(std::string_view text, Alphabet alphabet);

}  // namespace prc
