#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "prc/indexing_code.hpp"
#include "prc/lm.hpp"
#include "prc/substitution_code.hpp"

namespace prc::wm {

struct SubCode {
  sub::SubParams params;
  sub::SubKey key;
  bool operator==(const SubCode&) const = default;
};

struct IdxCode {
  idx::IdxParams params;
  idx::IdxKey key;
  bool operator==(const IdxCode&) const = default;
};

/// The code whose codewords are embedded. The indexing code is the edit-robust
/// choice; the binary code is kept for micro-alphabet experiments.
using PrcCode = std::variant<SubCode, IdxCode>;
using CodeParams = std::variant<sub::SubParams, idx::IdxParams>;

std::uint64_t block_length(const CodeParams& p);
std::uint64_t code_alphabet_size(const CodeParams& p);

struct WatermarkParams {
  std::uint64_t n = 0;           ///< code block length
  double alpha = 0.0;            ///< entropy rate
  std::uint64_t sigma_size = 0;  ///< |Sigma|
  std::uint64_t L_max = 0;
  sub::Profile profile = sub::Profile::Demo;

  void validate() const;
  bool operator==(const WatermarkParams&) const = default;
};

/// (8 |Sigma_prc| / alpha)^(2/alpha), the alphabet size required by the theory profile.
double theory_min_alphabet(double alpha, std::uint64_t prc_alphabet);

/// 8n + 6 alpha ell (in units of ln|Sigma|).
double beta_threshold(const WatermarkParams& params, double ell);

struct WatermarkKey {
  PrcCode code;
  std::vector<Symbol> phi;  ///< Sigma -> Sigma_prc
  std::uint64_t prc_alphabet = 0;

  bool operator==(const WatermarkKey&) const = default;
};

/// Throws AlphabetTooSmall (theory profile) and InvalidParams if params.n
/// differs from the code's block length.
WatermarkKey setup(const WatermarkParams& params, const CodeParams& code_params,
                   const prf::LocalPrfFamily& family, const Seed& seed);

/// Fresh codeword of the key's code.
SymbolString encode_codeword(const WatermarkKey& key, Rng& rng);

/// Samples tokens that carry a target symbol x under phi while keeping the
/// marginal law of the token equal to p when x is uniform. Pushforwards and
/// per-fiber prefix sums are cached per distribution object, so a long run
/// over a few distinct distributions costs O(log |Sigma|) per token.
class Embedder {
 public:
  Embedder(std::span<const Symbol> phi, std::uint64_t prc_alphabet);

  Symbol embed(Symbol x, const lm::TokenDistribution& p, Rng& rng);

 private:
  struct Cached {
    std::vector<double> pbar;
    std::vector<double> residual_cdf;
    double residual_total = 0.0;
    std::vector<double> fiber_cdf;  // prefix sums of p in fiber order
  };
  const Cached& lookup(const lm::TokenDistribution& p);

  std::span<const Symbol> phi_;
  std::uint64_t k_;
  std::vector<std::uint32_t> offsets_;  // fiber y is members_[offsets_[y], offsets_[y+1])
  std::vector<Symbol> members_;
  std::unordered_map<const lm::TokenDistribution*, Cached> cache_;
};

/// One call of the embedding step without caching.
Symbol embed_token(Symbol x, const lm::TokenDistribution& p, std::span<const Symbol> phi,
                   std::uint64_t prc_alphabet, Rng& rng);
Symbol embed_token(Symbol x, const lm::TokenDistribution& p, std::span<const Symbol> phi,
                   std::uint64_t prc_alphabet, const Seed& seed);

/// Watermarked generation: a new codeword every n tokens, stopping after the
/// terminal token or L_max tokens.
SymbolString wat(const WatermarkKey& key, const WatermarkParams& params, const lm::LanguageModel& model,
                 const Seed& seed);

struct DetectionResult {
  bool detected = false;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  ///< inclusive [i, j]
  std::uint64_t statistic = 0;  ///< W at the witness, else the largest W over windows
  double threshold = 0.0;
  std::uint64_t samples = 0;  ///< m of the underlying binary code
};

/// Tries every window tok[i..j] with j - i + 1 <= n and reports the first that
/// decodes. With the binary code only windows of exactly n tokens can decode.
DetectionResult detect(const WatermarkKey& key, const WatermarkParams& params, const SymbolString& tok);

}  // namespace prc::wm
