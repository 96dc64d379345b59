#include "prc/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace prc::wm {

std::uint64_t block_length(const CodeParams& p) {
  if (const auto* s = std::get_if<sub::SubParams>(&p)) return s->N;
  return std::get<idx::IdxParams>(p).m_out;
}

std::uint64_t code_alphabet_size(const CodeParams& p) {
  if (std::holds_alternative<sub::SubParams>(p)) return 2;
  return std::get<idx::IdxParams>(p).q_out;
}

void WatermarkParams::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(Errc::InvalidParams, "alpha must lie in [0,1)");
  if (n == 0) throw Error(Errc::InvalidParams, "block length must be positive");
  if (sigma_size < 1 || sigma_size > Alphabet::kMaxSize) throw Error(Errc::InvalidParams, "bad alphabet size");
  if (L_max < 1) throw Error(Errc::InvalidParams, "L_max must be positive");
}

double theory_min_alphabet(double alpha, std::uint64_t prc_alphabet) {
  return std::pow(8.0 * static_cast<double>(prc_alphabet) / alpha, 2.0 / alpha);
}

double beta_threshold(const WatermarkParams& params, double ell) {
  if (ell < 0) throw Error(Errc::InvalidArgument, "ell must be non-negative");
  return 8.0 * static_cast<double>(params.n) + 6.0 * params.alpha * ell;
}

WatermarkKey setup(const WatermarkParams& params, const CodeParams& code_params,
                   const prf::LocalPrfFamily& family, const Seed& seed) {
  params.validate();
  if (params.n != block_length(code_params)) {
    throw Error(Errc::InvalidParams, "watermark n must equal the code block length");
  }
  const std::uint64_t k = code_alphabet_size(code_params);
  if (params.profile == sub::Profile::Theory) {
    if (params.alpha <= 0.0) throw Error(Errc::InvalidParams, "theory profile needs alpha > 0");
    const double need = (2.0 / params.alpha) * std::log(8.0 * static_cast<double>(k) / params.alpha);
    if (std::log(static_cast<double>(params.sigma_size)) < need || params.sigma_size < k) {
      throw Error(Errc::AlphabetTooSmall, "alphabet of size " + std::to_string(params.sigma_size) +
                                              " below (8|Sigma_prc|/alpha)^(2/alpha)");
    }
  }
  WatermarkKey key;
  key.prc_alphabet = k;
  if (const auto* s = std::get_if<sub::SubParams>(&code_params)) {
    key.code = SubCode{*s, sub::keygen(*s, family, seed.derive("prc"))};
  } else {
    const auto& ip = std::get<idx::IdxParams>(code_params);
    key.code = IdxCode{ip, idx::keygen_idx(ip, family, seed.derive("prc"))};
  }
  key.phi.resize(params.sigma_size);
  Rng rng(seed.derive("phi"));
  for (auto& v : key.phi) v = static_cast<Symbol>(rng.below(k));
  return key;
}

SymbolString encode_codeword(const WatermarkKey& key, Rng& rng) {
  if (const auto* s = std::get_if<SubCode>(&key.code)) return sub::encode(s->key, s->params, rng);
  const auto& c = std::get<IdxCode>(key.code);
  return idx::encode_idx(c.key, c.params, rng);
}

Embedder::Embedder(std::span<const Symbol> phi, std::uint64_t prc_alphabet)
    : phi_(phi), k_(prc_alphabet), offsets_(prc_alphabet + 1, 0), members_(phi.size()) {
  if (prc_alphabet == 0) throw Error(Errc::InvalidArgument, "empty code alphabet");
  for (Symbol y : phi) {
    if (y >= prc_alphabet) throw Error(Errc::SymbolOutOfRange, "phi value outside code alphabet");
    ++offsets_[y + 1];
  }
  for (std::uint64_t y = 0; y < prc_alphabet; ++y) offsets_[y + 1] += offsets_[y];
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t s = 0; s < phi.size(); ++s) members_[fill[phi[s]]++] = static_cast<Symbol>(s);
}

const Embedder::Cached& Embedder::lookup(const lm::TokenDistribution& p) {
  auto it = cache_.find(&p);
  if (it != cache_.end()) return it->second;
  if (p.probs().size() != phi_.size()) {
    throw Error(Errc::AlphabetMismatch, "distribution and phi disagree on the alphabet");
  }
  Cached c;
  c.pbar = lm::pushforward(p.probs(), phi_, k_);
  c.residual_cdf.resize(k_);
  const double floor = 1.0 / static_cast<double>(k_);
  long double acc = 0;
  for (std::uint64_t y = 0; y < k_; ++y) {
    acc += std::max(0.0, c.pbar[y] - floor);
    c.residual_cdf[y] = static_cast<double>(acc);
  }
  c.residual_total = static_cast<double>(acc);
  c.fiber_cdf.resize(members_.size());
  for (std::uint64_t y = 0; y < k_; ++y) {
    long double f = 0;
    for (auto i = offsets_[y]; i < offsets_[y + 1]; ++i) {
      f += p[members_[i]];
      c.fiber_cdf[i] = static_cast<double>(f);
    }
  }
  return cache_.emplace(&p, std::move(c)).first->second;
}

Symbol Embedder::embed(Symbol x, const lm::TokenDistribution& p, Rng& rng) {
  if (x >= k_) throw Error(Errc::SymbolOutOfRange, "codeword symbol outside code alphabet");
  const Cached& c = lookup(p);
  const double keep = std::min(1.0, static_cast<double>(k_) * c.pbar[x]);
  Symbol y = x;
  if (!rng.bernoulli(keep) && c.residual_total > 1e-12) {
    const double u = rng.uniform01() * c.residual_total;
    auto it = std::upper_bound(c.residual_cdf.begin(), c.residual_cdf.end(), u);
    if (it == c.residual_cdf.end()) --it;
    y = static_cast<Symbol>(it - c.residual_cdf.begin());
  }
  const auto lo = c.fiber_cdf.begin() + offsets_[y];
  const auto hi = c.fiber_cdf.begin() + offsets_[y + 1];
  const double mass = lo == hi ? 0.0 : *(hi - 1);
  if (!(mass > 0.0)) throw Error(Errc::DegenerateResidual, "selected fiber has zero mass");
  auto it = std::upper_bound(lo, hi, rng.uniform01() * mass);
  if (it == hi) --it;
  auto i = static_cast<std::size_t>(it - c.fiber_cdf.begin());
  while (p[members_[i]] == 0.0 && i > offsets_[y]) --i;
  return members_[i];
}

Symbol embed_token(Symbol x, const lm::TokenDistribution& p, std::span<const Symbol> phi,
                   std::uint64_t prc_alphabet, Rng& rng) {
  Embedder e(phi, prc_alphabet);
  return e.embed(x, p, rng);
}

Symbol embed_token(Symbol x, const lm::TokenDistribution& p, std::span<const Symbol> phi,
                   std::uint64_t prc_alphabet, const Seed& seed) {
  Rng rng(seed);
  return embed_token(x, p, phi, prc_alphabet, rng);
}

SymbolString wat(const WatermarkKey& key, const WatermarkParams& params, const lm::LanguageModel& model,
                 const Seed& seed) {
  params.validate();
  if (model.alphabet().size() != params.sigma_size || key.phi.size() != params.sigma_size) {
    throw Error(Errc::AlphabetMismatch, "model, params and key disagree on |Sigma|");
  }
  Rng code_rng(seed.derive("codeword"));
  Rng token_rng(seed.derive("embed"));
  Embedder embedder(key.phi, key.prc_alphabet);
  std::vector<Symbol> out;
  SymbolString x;
  std::size_t j = params.n;
  auto state = model.initial();
  while (out.size() < params.L_max) {
    if (j == params.n) {
      x = encode_codeword(key, code_rng);
      j = 0;
    }
    const Symbol tok = embedder.embed(x[j++], model.distribution(state), token_rng);
    out.push_back(tok);
    if (tok == model.terminal()) break;
    state = model.advance(state, tok);
  }
  return SymbolString::trusted(model.alphabet(), std::move(out));
}

DetectionResult detect(const WatermarkKey& key, const WatermarkParams& params, const SymbolString& tok) {
  std::vector<Symbol> y(tok.size());
  for (std::size_t i = 0; i < tok.size(); ++i) {
    if (tok[i] >= key.phi.size()) {
      throw Error(Errc::AlphabetMismatch, "token " + std::to_string(tok[i]) + " outside the key's alphabet");
    }
    y[i] = key.phi[tok[i]];
  }
  DetectionResult r;
  const std::size_t ell = y.size();
  const std::size_t n = params.n;
  if (const auto* c = std::get_if<SubCode>(&key.code)) {
    r.threshold = c->params.threshold();
    r.samples = c->params.m;
    for (std::size_t i = 0; i + n <= ell; ++i) {
      const auto d = sub::decode(c->key, c->params, std::span<const Symbol>(y.data() + i, n));
      r.statistic = std::max(r.statistic, d.statistic);
      if (d.accepted) {
        r.detected = true;
        r.witness = std::make_pair(i, i + n - 1);
        r.statistic = d.statistic;
        return r;
      }
    }
    return r;
  }
  const auto& c = std::get<IdxCode>(key.code);
  idx::WindowDecoder dec(c.key, c.params);
  r.threshold = dec.threshold();
  r.samples = c.params.inner.m;
  for (std::size_t i = 0; i < ell; ++i) {
    dec.clear();
    const std::size_t last = std::min(i + n, ell);
    for (std::size_t j = i; j < last; ++j) {
      dec.push(y[j]);
      r.statistic = std::max(r.statistic, dec.statistic());
      if (dec.accepts()) {
        r.detected = true;
        r.witness = std::make_pair(i, j);
        r.statistic = dec.statistic();
        return r;
      }
    }
  }
  return r;
}

}  // namespace prc::wm
