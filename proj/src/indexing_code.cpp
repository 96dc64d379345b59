#include "prc/indexing_code.hpp"

#include <cmath>
#include <string>

namespace prc::idx {

IdxParams IdxParams::make(const sub::SubParams& inner, std::uint32_t rho) {
  IdxParams p;
  p.inner = inner;
  p.rho = rho;
  p.m_out = static_cast<std::uint64_t>(std::ceil(std::log(2.0) * static_cast<double>(inner.N)));
  p.q_out = static_cast<std::uint64_t>(rho) * inner.N;
  p.validate();
  return p;
}

void IdxParams::validate() const {
  inner.validate();
  if (rho < 2) throw Error(Errc::InvalidParams, "rho must be an integer > 1");
  const auto expected_m = static_cast<std::uint64_t>(std::ceil(std::log(2.0) * static_cast<double>(inner.N)));
  if (m_out != expected_m) throw Error(Errc::InvalidParams, "m_out must equal ceil(ln(2) n)");
  if (q_out != static_cast<std::uint64_t>(rho) * inner.N) {
    throw Error(Errc::InvalidParams, "q_out must equal rho * n");
  }
  if (q_out > (std::uint64_t{1} << 32)) throw Error(Errc::TooLarge, "alphabet above 2^32");
}

IdxKey::IdxKey(sub::SubKey inner_key, std::vector<Symbol> psi, std::uint64_t inner_length)
    : inner_key_(std::move(inner_key)), psi_(std::move(psi)) {
  if (inner_length == 0 || psi_.size() % inner_length != 0) {
    throw Error(Errc::InvalidParams, "psi length must be a multiple of n");
  }
  rho_ = static_cast<std::uint32_t>(psi_.size() / inner_length);
  std::vector<std::uint32_t> fill(inner_length, 0);
  fibers_.resize(psi_.size());
  for (std::size_t a = 0; a < psi_.size(); ++a) {
    const Symbol j = psi_[a];
    if (j >= inner_length || fill[j] == rho_) {
      throw Error(Errc::InvalidParams, "psi is not balanced");
    }
    fibers_[static_cast<std::size_t>(j) * rho_ + fill[j]++] = static_cast<Symbol>(a);
  }
}

IdxKey keygen_idx(const IdxParams& params, const prf::LocalPrfFamily& family, const Seed& seed) {
  params.validate();
  sub::SubKey inner = sub::keygen(params.inner, family, seed.derive("inner"));
  // Uniform shuffle of the multiset with each j in [n] exactly rho times.
  std::vector<Symbol> psi(params.q_out);
  for (std::size_t a = 0; a < psi.size(); ++a) psi[a] = static_cast<Symbol>(a / params.rho);
  Rng rng(seed.derive("psi"));
  for (std::size_t i = psi.size() - 1; i > 0; --i) std::swap(psi[i], psi[rng.below(i + 1)]);
  return IdxKey(std::move(inner), std::move(psi), params.inner.N);
}

SymbolString perturb_difference(std::uint64_t n, std::uint64_t m, const BitString& y0, Rng& rng) {
  if (y0.size() != n) {
    throw Error(Errc::LengthMismatch, "y0 has length " + std::to_string(y0.size()) +
                                          ", expected " + std::to_string(n));
  }
  if (m == 0) throw Error(Errc::InvalidArgument, "m must be positive");
  std::vector<Symbol> y(m);
  std::vector<std::uint8_t> in1(n, 0);
  for (auto& s : y) {
    s = static_cast<Symbol>(rng.below(n));
    in1[s] = 1;
  }
  std::vector<Symbol> only0, only1;  // S0 \ S1 and S1 \ S0, ascending
  for (std::uint64_t i = 0; i < n; ++i) {
    const bool a = y0[i] != 0;
    const bool b = in1[i] != 0;
    if (a && !b) only0.push_back(static_cast<Symbol>(i));
    if (b && !a) only1.push_back(static_cast<Symbol>(i));
  }
  auto shuffle = [&](std::vector<Symbol>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  };
  std::vector<Symbol> remap(n);
  for (std::uint64_t i = 0; i < n; ++i) remap[i] = static_cast<Symbol>(i);
  if (only0.size() >= only1.size()) {
    // sigma : S1\S0 -> S0\S1; every instance of a becomes sigma(a).
    shuffle(only0);
    for (std::size_t k = 0; k < only1.size(); ++k) remap[only1[k]] = only0[k];
  } else {
    // tau : S0\S1 -> S1\S0; every instance of tau(a) becomes a.
    shuffle(only1);
    for (std::size_t k = 0; k < only0.size(); ++k) remap[only1[k]] = only0[k];
  }
  for (auto& s : y) s = remap[s];
  return SymbolString::trusted(Alphabet(n), std::move(y));
}

SymbolString perturb_difference(std::uint64_t n, std::uint64_t m, const BitString& y0,
                                const Seed& seed) {
  Rng rng(seed);
  return perturb_difference(n, m, y0, rng);
}

SymbolString encode_idx(const IdxKey& key, const IdxParams& params, Rng& rng) {
  const BitString y0 = sub::encode(key.inner_key(), params.inner, rng);
  const SymbolString y = perturb_difference(params.inner.N, params.m_out, y0, rng);
  std::vector<Symbol> z(params.m_out);
  for (std::size_t j = 0; j < z.size(); ++j) {
    const auto fiber = key.fiber(y[j]);
    z[j] = fiber[rng.below(fiber.size())];
  }
  return SymbolString::trusted(Alphabet(params.q_out), std::move(z));
}

SymbolString encode_idx(const IdxKey& key, const IdxParams& params, const Seed& seed) {
  Rng rng(seed);
  return encode_idx(key, params, rng);
}

BitString project(std::span<const Symbol> psi, std::uint64_t n, std::span<const Symbol> z) {
  std::vector<Symbol> bits(n, 0);
  for (Symbol s : z) {
    if (s >= psi.size()) {
      throw Error(Errc::SymbolOutOfRange, "symbol " + std::to_string(s) +
                                              " outside alphabet of size " + std::to_string(psi.size()));
    }
    bits[psi[s]] = 1;
  }
  return BitString::trusted(Alphabet::binary(), std::move(bits));
}

sub::DecodeResult decode_idx(const IdxKey& key, const IdxParams& params, std::span<const Symbol> z) {
  const BitString y = project(key.psi(), params.inner.N, z);
  return sub::decode(key.inner_key(), params.inner, y);
}

sub::DecodeResult decode_idx(const IdxKey& key, const IdxParams& params, const SymbolString& z) {
  return decode_idx(key, params, z.symbols());
}

bool is_typical(const SymbolString& z, std::uint64_t q, std::uint64_t m) {
  if (z.size() != m) throw Error(Errc::LengthMismatch, "typicality needs len(z) = m");
  std::vector<std::uint8_t> seen(q, 0);
  std::uint64_t unique = 0;
  for (Symbol s : z) {
    if (s >= q) throw Error(Errc::SymbolOutOfRange, "symbol outside [q]");
    unique += !seen[s];
    seen[s] = 1;
  }
  const double qd = static_cast<double>(q);
  const double md = static_cast<double>(m);
  const double center = qd * (1.0 - std::exp(-md / qd));
  const double half_width = m > 0 ? 2.0 * std::sqrt(md) * std::log(md) : 0.0;
  const double u = static_cast<double>(unique);
  return center - half_width <= u && u <= center + half_width;
}

WindowDecoder::WindowDecoder(const IdxKey& key, const IdxParams& params)
    : key_(&key), q_out_(params.q_out), inner_(key.inner_key(), params.inner), counts_(params.inner.N, 0) {}

void WindowDecoder::push(Symbol s) {
  if (s >= q_out_) throw Error(Errc::SymbolOutOfRange, "symbol outside code alphabet");
  const Symbol j = key_->psi()[s];
  if (counts_[j]++ == 0) {
    inner_.flip(j);
    touched_.push_back(j);
  }
}

void WindowDecoder::clear() {
  for (Symbol j : touched_) {
    counts_[j] = 0;
    inner_.flip(j);
  }
  touched_.clear();
}

}  // namespace prc::idx
