#include "prc/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

namespace prc {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::AlphabetMismatch: return "AlphabetMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidFamily: return "InvalidFamily";
    case Errc::InvalidRate: return "InvalidRate";
    case Errc::DemoParamsViolateBlockBound: return "DemoParamsViolateBlockBound";
    case Errc::FamilyMismatch: return "FamilyMismatch";
    case Errc::SymbolOutOfRange: return "SymbolOutOfRange";
    case Errc::InvalidStrategyForKind: return "InvalidStrategyForKind";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ZeroProbabilityToken: return "ZeroProbabilityToken";
    case Errc::DegenerateResidual: return "DegenerateResidual";
    case Errc::AlphabetTooSmall: return "AlphabetTooSmall";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::ParamParse: return "ParamParse";
    case Errc::SpecParse: return "SpecParse";
    case Errc::ConfigParse: return "ConfigParse";
    case Errc::KeyKindMismatch: return "KeyKindMismatch";
    case Errc::KeyFormat: return "KeyFormat";
    case Errc::Io: return "IoError";
  }
  return "Unknown";
}

Alphabet::Alphabet(std::uint64_t size) : size_(size) {
  if (size == 0 || size > kMaxSize) {
    throw Error(Errc::InvalidArgument, "alphabet size must be in [1, 2^32]");
  }
}

SymbolString::SymbolString(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(alphabet), symbols_(std::move(symbols)) {
  for (Symbol s : symbols_) {
    if (!alphabet_.contains(s)) {
      throw Error(Errc::SymbolOutOfRange,
                  "symbol " + std::to_string(s) + " outside alphabet of size " +
                      std::to_string(alphabet_.size()));
    }
  }
}

SymbolString SymbolString::filled(Alphabet alphabet, std::size_t length, Symbol value) {
  if (!alphabet.contains(value)) throw Error(Errc::SymbolOutOfRange, "fill symbol");
  return trusted(alphabet, std::vector<Symbol>(length, value));
}

SymbolString SymbolString::substr(std::size_t begin, std::size_t end) const {
  if (begin > end || end > symbols_.size()) {
    throw Error(Errc::InvalidArgument, "substring bounds");
  }
  return trusted(alphabet_, std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(begin),
                                                symbols_.begin() + static_cast<std::ptrdiff_t>(end)));
}

Permutation::Permutation(std::vector<std::uint32_t> forward)
    : forward_(std::move(forward)), inverse_(forward_.size()) {
  std::vector<char> seen(forward_.size(), 0);
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    const auto v = forward_[i];
    if (v >= forward_.size() || seen[v]) {
      throw Error(Errc::InvalidArgument, "permutation is not a bijection");
    }
    seen[v] = 1;
    inverse_[v] = static_cast<std::uint32_t>(i);
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> f(n);
  std::iota(f.begin(), f.end(), 0u);
  return Permutation(std::move(f));
}

Permutation Permutation::inverse() const { return Permutation(inverse_); }

namespace {

void require_same_alphabet(const SymbolString& a, const SymbolString& b) {
  if (a.alphabet() != b.alphabet()) {
    throw Error(Errc::AlphabetMismatch, "strings over different alphabets");
  }
}

}  // namespace

std::size_t hamming_distance(const SymbolString& a, const SymbolString& b) {
  require_same_alphabet(a, b);
  if (a.size() != b.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::size_t edit_distance(const SymbolString& a, const SymbolString& b) {
  require_same_alphabet(a, b);
  const SymbolString& row_src = a.size() >= b.size() ? a : b;
  const SymbolString& col_src = a.size() >= b.size() ? b : a;
  const std::size_t cols = col_src.size();
  std::vector<std::size_t> prev(cols + 1), cur(cols + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= row_src.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= cols; ++j) {
      const std::size_t sub = prev[j - 1] + (row_src[i - 1] != col_src[j - 1]);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[cols];
}

std::size_t edit_distance_capped(const SymbolString& a, const SymbolString& b,
                                 std::size_t bound) {
  require_same_alphabet(a, b);
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t over = bound + 1;
  if ((n > m ? n - m : m - n) > bound) return over;

  // Only cells with |i - j| <= bound are evaluated; the cell just outside the
  // band on each side is pinned to `over` so neighbours never read stale rows.
  std::vector<std::size_t> prev(m + 1, over), cur(m + 1, over);
  for (std::size_t j = 0; j <= std::min(m, bound); ++j) prev[j] = j;
  if (bound + 1 <= m) prev[bound + 1] = over;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t jlo = i > bound ? i - bound : 0;
    const std::size_t jhi = std::min(m, i + bound);
    if (jlo > 0) cur[jlo - 1] = over;
    for (std::size_t j = jlo; j <= jhi; ++j) {
      std::size_t best = prev[j] + 1;
      if (j > 0) {
        best = std::min(best, prev[j - 1] + (a[i - 1] != b[j - 1]));
        best = std::min(best, cur[j - 1] + 1);
      }
      cur[j] = std::min(best, over);
    }
    if (jhi + 1 <= m) cur[jhi + 1] = over;
    std::swap(prev, cur);
  }
  return std::min(prev[m], over);
}

Permutation random_permutation(std::size_t n, Rng& rng) {
  if (n == 0) throw Error(Errc::InvalidArgument, "permutation size must be positive");
  std::vector<std::uint32_t> f(n);
  std::iota(f.begin(), f.end(), 0u);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(f[i], f[rng.below(i + 1)]);
  }
  return Permutation(std::move(f));
}

Permutation random_permutation(std::size_t n, const Seed& seed) {
  Rng rng(seed);
  return random_permutation(n, rng);
}

SymbolString apply_permutation(const Permutation& pi, const SymbolString& x) {
  if (pi.size() != x.size()) {
    throw Error(Errc::LengthMismatch, "permutation size " + std::to_string(pi.size()) +
                                          " vs string length " + std::to_string(x.size()));
  }
  std::vector<Symbol> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[pi(i)];
  return SymbolString::trusted(x.alphabet(), std::move(out));
}

std::vector<std::uint32_t> sample_distinct(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw Error(Errc::InvalidArgument, "cannot draw more distinct indices than n");
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(n - i)]);
  }
  pool.resize(k);
  return pool;
}

std::string to_text(const SymbolString& s) {
  std::string out;
  out.reserve(s.size() * 2);
  char buf[16];
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out.push_back(' ');
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, s[i]);
    out.append(buf, end);
  }
  return out;
}

SymbolString parse_symbols(std::string_view text, Alphabet alphabet) {
  std::vector<Symbol> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    const std::string_view tok = text.substr(i, j - i);
    const bool bit_run = alphabet.size() == 2 && tok.size() > 1 &&
                         tok.find_first_not_of("01") == std::string_view::npos;
    if (bit_run) {
      for (char c : tok) out.push_back(static_cast<Symbol>(c - '0'));
    } else {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw Error(Errc::InvalidArgument, "not a symbol: '" + std::string(tok) + "'");
      }
      if (v >= alphabet.size()) {
        throw Error(Errc::SymbolOutOfRange,
                    "symbol " + std::string(tok) + " outside alphabet of size " +
                        std::to_string(alphabet.size()));
      }
      out.push_back(static_cast<Symbol>(v));
    }
    i = j;
  }
  return SymbolString::trusted(alphabet, std::move(out));
}

}  // namespace prc
