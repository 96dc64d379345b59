#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "prc/core.hpp"

namespace prc::lm {

/// A probability vector over an alphabet, with its prefix sums for sampling.
class TokenDistribution {
 public:
  TokenDistribution() = default;
  /// Throws InvalidArgument unless entries are non-negative and sum to 1 within 1e-9.
  TokenDistribution(Alphabet alphabet, std::vector<double> probs);

  static TokenDistribution point_mass(Alphabet alphabet, Symbol s);
  static TokenDistribution uniform_over(Alphabet alphabet, std::span<const Symbol> support);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](Symbol s) const { return probs_[s]; }

  Symbol sample(Rng& rng) const;
  /// Shannon entropy in nats.
  double entropy() const;

 private:
  Alphabet alphabet_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// Autoregressive model over an alphabet with a terminal token.
///
/// Prefixes are summarized by an opaque State. Once the terminal token has
/// been emitted every later distribution is the point mass on it.
class LanguageModel {
 public:
  using State = std::uint64_t;
  static constexpr State kTerminated = ~State{0};

  LanguageModel(Alphabet alphabet, Symbol terminal);
  virtual ~LanguageModel() = default;

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  Symbol terminal() const noexcept { return terminal_; }

  State initial() const { return do_initial(); }
  State advance(State s, Symbol tok) const;
  /// The returned reference stays valid for the model's lifetime.
  const TokenDistribution& distribution(State s) const;

  /// Model(tok_i = . | prefix).
  const TokenDistribution& next(const SymbolString& prefix) const;

 protected:
  virtual State do_initial() const = 0;
  virtual State do_advance(State s, Symbol tok) const = 0;
  virtual const TokenDistribution& do_distribution(State s) const = 0;

 private:
  Alphabet alphabet_;
  Symbol terminal_;
  TokenDistribution terminal_mass_;
};

/// Uniform over a fixed subset of symbols at every step.
class UniformSubsetModel final : public LanguageModel {
 public:
  UniformSubsetModel(Alphabet alphabet, Symbol terminal, std::vector<Symbol> subset);

 protected:
  State do_initial() const override { return 0; }
  State do_advance(State, Symbol) const override { return 0; }
  const TokenDistribution& do_distribution(State) const override { return dist_; }

 private:
  TokenDistribution dist_;
};

/// First-order Markov chain: the next distribution depends on the last token.
/// Point-mass rows give a deterministic model.
class MarkovModel final : public LanguageModel {
 public:
  MarkovModel(Alphabet alphabet, Symbol terminal, std::vector<double> initial,
              std::vector<std::vector<double>> transitions);

 protected:
  State do_initial() const override { return 0; }
  State do_advance(State, Symbol tok) const override { return State{tok} + 1; }
  const TokenDistribution& do_distribution(State s) const override {
    return s == 0 ? initial_ : rows_[s - 1];
  }

 private:
  TokenDistribution initial_;
  std::vector<TokenDistribution> rows_;
};

/// Uniform over the non-terminal symbols for `length` tokens, then the terminal.
class FixedLengthUniformModel final : public LanguageModel {
 public:
  FixedLengthUniformModel(Alphabet alphabet, Symbol terminal, std::uint64_t length);

  std::uint64_t length() const noexcept { return length_; }

 protected:
  State do_initial() const override { return 0; }
  State do_advance(State s, Symbol) const override { return s + 1; }
  const TokenDistribution& do_distribution(State s) const override {
    return s < length_ ? uniform_ : stop_;
  }

 private:
  std::uint64_t length_;
  TokenDistribution uniform_;
  TokenDistribution stop_;
};

/// Draws tokens until the terminal token (included) or `cap` tokens.
SymbolString sample_sequence(const LanguageModel& model, const Seed& seed, std::uint64_t cap);
SymbolString sample_sequence(const LanguageModel& model, Rng& rng, std::uint64_t cap);

/// -ln Model(tok[begin, end) | tok[0, begin)) in nats, for 0 <= begin <= end <= len(tok).
/// Throws ZeroProbabilityToken if a realized token has probability 0.
double empirical_entropy(const LanguageModel& model, const SymbolString& tok, std::size_t begin,
                         std::size_t end);

/// Sum of the Shannon entropies (nats) of the conditionals at positions [begin, end).
double mean_entropy(const LanguageModel& model, const SymbolString& tok, std::size_t begin,
                    std::size_t end);

/// (phi o p)(s') = p(phi^-1(s')).
std::vector<double> pushforward(std::span<const double> p, std::span<const Symbol> phi,
                                std::uint64_t out_size);

/// Sum over positions [begin, end) of sum_s' min(1/|S'|, (phi o P_i)(s')).
double spread(const LanguageModel& model, std::span<const Symbol> phi, std::uint64_t out_size,
              const SymbolString& tok, std::size_t begin, std::size_t end);

}  // namespace prc::lm
