#include "prc/lm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace prc::lm {

TokenDistribution::TokenDistribution(Alphabet alphabet, std::vector<double> probs)
    : alphabet_(alphabet), probs_(std::move(probs)) {
  if (probs_.size() != alphabet_.size()) {
    throw Error(Errc::LengthMismatch, "distribution has " + std::to_string(probs_.size()) +
                                          " entries for alphabet of size " + std::to_string(alphabet_.size()));
  }
  cdf_.resize(probs_.size());
  long double acc = 0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
      throw Error(Errc::InvalidArgument, "negative or non-finite probability");
    }
    acc += probs_[i];
    cdf_[i] = static_cast<double>(acc);
  }
  if (std::fabs(static_cast<double>(acc) - 1.0) > 1e-9) {
    throw Error(Errc::InvalidArgument, "probabilities sum to " + std::to_string(static_cast<double>(acc)));
  }
}

TokenDistribution TokenDistribution::point_mass(Alphabet alphabet, Symbol s) {
  if (!alphabet.contains(s)) throw Error(Errc::SymbolOutOfRange, "point mass outside alphabet");
  std::vector<double> p(alphabet.size(), 0.0);
  p[s] = 1.0;
  return TokenDistribution(alphabet, std::move(p));
}

TokenDistribution TokenDistribution::uniform_over(Alphabet alphabet, std::span<const Symbol> support) {
  if (support.empty()) throw Error(Errc::InvalidArgument, "empty support");
  std::vector<double> p(alphabet.size(), 0.0);
  const double w = 1.0 / static_cast<double>(support.size());
  for (Symbol s : support) {
    if (!alphabet.contains(s)) throw Error(Errc::SymbolOutOfRange, "support outside alphabet");
    if (p[s] != 0.0) throw Error(Errc::InvalidArgument, "repeated support symbol");
    p[s] = w;
  }
  return TokenDistribution(alphabet, std::move(p));
}

Symbol TokenDistribution::sample(Rng& rng) const {
  const double u = rng.uniform01() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  // Skip zero-mass entries that share a prefix sum with their predecessor.
  auto idx = static_cast<std::size_t>(it - cdf_.begin());
  while (probs_[idx] == 0.0 && idx + 1 < probs_.size()) ++idx;
  while (probs_[idx] == 0.0 && idx > 0) --idx;
  return static_cast<Symbol>(idx);
}

double TokenDistribution::entropy() const {
  long double h = 0;
  for (double p : probs_) {
    if (p > 0) h -= p * std::log(static_cast<long double>(p));
  }
  return static_cast<double>(h);
}

LanguageModel::LanguageModel(Alphabet alphabet, Symbol terminal)
    : alphabet_(alphabet), terminal_(terminal) {
  if (!alphabet.contains(terminal)) throw Error(Errc::SymbolOutOfRange, "terminal token outside alphabet");
  terminal_mass_ = TokenDistribution::point_mass(alphabet, terminal);
}

LanguageModel::State LanguageModel::advance(State s, Symbol tok) const {
  if (s == kTerminated || tok == terminal_) return kTerminated;
  return do_advance(s, tok);
}

const TokenDistribution& LanguageModel::distribution(State s) const {
  return s == kTerminated ? terminal_mass_ : do_distribution(s);
}

const TokenDistribution& LanguageModel::next(const SymbolString& prefix) const {
  State s = initial();
  for (Symbol t : prefix) {
    if (!alphabet_.contains(t)) throw Error(Errc::SymbolOutOfRange, "prefix token outside alphabet");
    s = advance(s, t);
  }
  return distribution(s);
}

UniformSubsetModel::UniformSubsetModel(Alphabet alphabet, Symbol terminal, std::vector<Symbol> subset)
    : LanguageModel(alphabet, terminal), dist_(TokenDistribution::uniform_over(alphabet, subset)) {}

MarkovModel::MarkovModel(Alphabet alphabet, Symbol terminal, std::vector<double> initial,
                         std::vector<std::vector<double>> transitions)
    : LanguageModel(alphabet, terminal), initial_(alphabet, std::move(initial)) {
  if (transitions.size() != alphabet.size()) {
    throw Error(Errc::InvalidArgument, "transition table needs one row per symbol");
  }
  rows_.reserve(transitions.size());
  for (auto& row : transitions) rows_.emplace_back(alphabet, std::move(row));
}

namespace {
std::vector<Symbol> all_but(std::uint64_t size, Symbol skip) {
  std::vector<Symbol> v;
  v.reserve(size);
  for (std::uint64_t s = 0; s < size; ++s) {
    if (s != skip) v.push_back(static_cast<Symbol>(s));
  }
  return v;
}
}  // namespace

FixedLengthUniformModel::FixedLengthUniformModel(Alphabet alphabet, Symbol terminal, std::uint64_t length)
    : LanguageModel(alphabet, terminal),
      length_(length),
      stop_(TokenDistribution::point_mass(alphabet, terminal)) {
  if (alphabet.size() < 2) throw Error(Errc::AlphabetTooSmall, "need a non-terminal symbol");
  const auto support = all_but(alphabet.size(), terminal);
  uniform_ = TokenDistribution::uniform_over(alphabet, support);
}

SymbolString sample_sequence(const LanguageModel& model, Rng& rng, std::uint64_t cap) {
  if (cap < 1) throw Error(Errc::InvalidArgument, "cap must be at least 1");
  std::vector<Symbol> out;
  auto state = model.initial();
  while (out.size() < cap) {
    const Symbol tok = model.distribution(state).sample(rng);
    out.push_back(tok);
    if (tok == model.terminal()) break;
    state = model.advance(state, tok);
  }
  return SymbolString::trusted(model.alphabet(), std::move(out));
}

SymbolString sample_sequence(const LanguageModel& model, const Seed& seed, std::uint64_t cap) {
  Rng rng(seed);
  return sample_sequence(model, rng, cap);
}

namespace {
void check_window(const LanguageModel& model, const SymbolString& tok, std::size_t begin, std::size_t end) {
  if (begin > end || end > tok.size()) throw Error(Errc::InvalidArgument, "window out of range");
  if (tok.alphabet() != model.alphabet()) throw Error(Errc::AlphabetMismatch, "tokens not over model alphabet");
}
}  // namespace

double empirical_entropy(const LanguageModel& model, const SymbolString& tok, std::size_t begin,
                         std::size_t end) {
  check_window(model, tok, begin, end);
  long double h = 0;
  auto state = model.initial();
  for (std::size_t i = 0; i < end; ++i) {
    if (i >= begin) {
      const double p = model.distribution(state)[tok[i]];
      if (p <= 0.0) {
        throw Error(Errc::ZeroProbabilityToken, "token at position " + std::to_string(i) + " has probability 0");
      }
      h -= std::log(static_cast<long double>(p));
    }
    state = model.advance(state, tok[i]);
  }
  return static_cast<double>(h);
}

double mean_entropy(const LanguageModel& model, const SymbolString& tok, std::size_t begin,
                    std::size_t end) {
  check_window(model, tok, begin, end);
  long double h = 0;
  auto state = model.initial();
  for (std::size_t i = 0; i < end; ++i) {
    if (i >= begin) h += model.distribution(state).entropy();
    state = model.advance(state, tok[i]);
  }
  return static_cast<double>(h);
}

std::vector<double> pushforward(std::span<const double> p, std::span<const Symbol> phi,
                                std::uint64_t out_size) {
  if (p.size() != phi.size()) throw Error(Errc::LengthMismatch, "phi must be defined on every symbol");
  std::vector<long double> acc(out_size, 0);
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (phi[s] >= out_size) throw Error(Errc::SymbolOutOfRange, "phi value outside target alphabet");
    acc[phi[s]] += p[s];
  }
  return {acc.begin(), acc.end()};
}

double spread(const LanguageModel& model, std::span<const Symbol> phi, std::uint64_t out_size,
              const SymbolString& tok, std::size_t begin, std::size_t end) {
  check_window(model, tok, begin, end);
  const double cap = 1.0 / static_cast<double>(out_size);
  long double total = 0;
  auto state = model.initial();
  for (std::size_t i = 0; i < end; ++i) {
    if (i >= begin) {
      for (double v : pushforward(model.distribution(state).probs(), phi, out_size)) total += std::min(cap, v);
    }
    state = model.advance(state, tok[i]);
  }
  return static_cast<double>(total);
}

}  // namespace prc::lm
