#include "prc/substitution_code.hpp"

#include <cmath>
#include <string>

namespace prc::sub {

double SubParams::threshold() const {
  const double md = static_cast<double>(m);
  return md / 2.0 + std::log(md) * std::sqrt(md);
}

void SubParams::validate() const {
  if (n == 0 || m == 0) throw Error(Errc::InvalidParams, "n and m must be positive");
  if (!(p > 0.0 && p < 0.5)) throw Error(Errc::InvalidRate, "p must lie in (0, 1/2)");
  if (!(q >= 0.0 && q < 0.5)) throw Error(Errc::InvalidRate, "q must lie in [0, 1/2)");
  if (N < payload_length()) {
    throw Error(Errc::DemoParamsViolateBlockBound,
                "N = " + std::to_string(N) + " < (n+1)m = " + std::to_string(payload_length()));
  }
  if (N > (std::uint64_t{1} << 32)) throw Error(Errc::TooLarge, "block length above 2^32");
}

namespace {

void check_rates(double p, double q) {
  if (!(p > 0.0 && p < 0.5)) throw Error(Errc::InvalidRate, "p must lie in (0, 1/2)");
  if (!(q >= 0.0 && q < 0.5)) throw Error(Errc::InvalidRate, "q must lie in [0, 1/2)");
}

}  // namespace

SubParams derive_params(std::uint64_t n, double p, double q, double c0) {
  check_rates(p, q);
  if (n == 0) throw Error(Errc::InvalidParams, "n must be positive");
  if (!(c0 > 0.0)) throw Error(Errc::InvalidParams, "C0 must be positive");
  const double exponent = 4.0 * std::log2(1.0 / (1.0 - 2.0 * p));
  double raw = c0 * std::pow(1.0 - 2.0 * q, -4.0) * std::pow(static_cast<double>(n), exponent);
  // Snap values within rounding noise of an integer so exact cases stay exact.
  const double nearest = std::round(raw);
  if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, nearest)) raw = nearest;
  const double m = std::ceil(raw);
  const double big_n = 3.0 * m * static_cast<double>(n + 1) * static_cast<double>(n + 1);
  if (!(big_n < 1.8e19)) throw Error(Errc::TooLarge, "derived block length overflows 64 bits");
  SubParams params;
  params.n = n;
  params.m = static_cast<std::uint64_t>(m);
  params.N = 3 * params.m * (n + 1) * (n + 1);
  params.p = p;
  params.q = q;
  params.profile = Profile::Theory;
  return params;
}

SubParams demo_params(std::uint64_t n, std::uint64_t m, std::uint64_t N, double p, double q) {
  SubParams params{n, m, N, p, q, Profile::Demo};
  params.validate();
  return params;
}

SubParams demo_params_full_block(std::uint64_t n, std::uint64_t m, double p, double q) {
  return demo_params(n, m, 3 * m * (n + 1) * (n + 1), p, q);
}

SubKey keygen(const SubParams& params, const prf::LocalPrfFamily& family, const Seed& seed) {
  params.validate();
  if (family.input_len != params.n) {
    throw Error(Errc::FamilyMismatch, "family input length " + std::to_string(family.input_len) +
                                          " != n = " + std::to_string(params.n));
  }
  SubKey key;
  key.prf_key = prf::sample_key(family, seed.derive("prf"));
  Rng zr(seed.derive("z"));
  std::vector<Symbol> z(params.N);
  for (auto& b : z) b = static_cast<Symbol>(zr.next() >> 63);
  key.z = BitString::trusted(Alphabet::binary(), std::move(z));
  key.pi = random_permutation(params.N, seed.derive("pi"));
  return key;
}

namespace {

void check_key(const SubKey& key, const SubParams& params) {
  if (key.z.size() != params.N || key.pi.size() != params.N ||
      key.prf_key.family().input_len != params.n) {
    throw Error(Errc::InvalidParams, "key does not match parameters");
  }
}

}  // namespace

BitString encode(const SubKey& key, const SubParams& params, Rng& rng) {
  check_key(key, params);
  const std::uint64_t block = params.n + 1;
  const std::uint64_t payload = params.payload_length();
  std::vector<std::uint8_t> a(params.N);
  for (std::uint64_t j = 0; j < params.m; ++j) {
    std::uint8_t* x = a.data() + j * block;
    for (std::uint64_t t = 0; t < params.n; ++t) x[t] = static_cast<std::uint8_t>(rng.next() >> 63);
    const int e = rng.bernoulli(params.q) ? 1 : 0;
    x[params.n] = static_cast<std::uint8_t>(
        key.prf_key.eval_bits(std::span<const std::uint8_t>(x, params.n)) ^ e);
  }
  for (std::uint64_t t = payload; t < params.N; ++t) a[t] = static_cast<std::uint8_t>(rng.next() >> 63);

  std::vector<Symbol> out(params.N);
  const auto fwd = key.pi.forward();
  for (std::uint64_t i = 0; i < params.N; ++i) {
    const auto k = fwd[i];
    out[i] = static_cast<Symbol>(a[k] ^ key.z[k]);
  }
  return BitString::trusted(Alphabet::binary(), std::move(out));
}

BitString encode(const SubKey& key, const SubParams& params, const Seed& seed) {
  Rng rng(seed);
  return encode(key, params, rng);
}

DecodeResult decode(const SubKey& key, const SubParams& params, std::span<const Symbol> y) {
  check_key(key, params);
  if (y.size() != params.N) {
    throw Error(Errc::LengthMismatch, "received " + std::to_string(y.size()) +
                                          " bits, block length is " + std::to_string(params.N));
  }
  const std::uint64_t block = params.n + 1;
  const auto inv = key.pi.inverse_map();
  std::vector<std::uint8_t> x(block);
  std::uint64_t agree = 0;
  for (std::uint64_t j = 0; j < params.m; ++j) {
    for (std::uint64_t t = 0; t < block; ++t) {
      const std::uint64_t k = j * block + t;
      x[t] = static_cast<std::uint8_t>((y[inv[k]] ^ key.z[k]) & 1u);
    }
    const int f = key.prf_key.eval_bits(std::span<const std::uint8_t>(x.data(), params.n));
    agree += (x[params.n] == f);
  }
  DecodeResult r;
  r.statistic = agree;
  r.threshold = params.threshold();
  r.accepted = static_cast<double>(agree) > r.threshold;
  return r;
}

DecodeResult decode(const SubKey& key, const SubParams& params, const BitString& y) {
  if (y.alphabet().size() != 2) throw Error(Errc::AlphabetMismatch, "codeword must be binary");
  return decode(key, params, y.symbols());
}

IncrementalDecoder::IncrementalDecoder(const SubKey& key, const SubParams& params)
    : key_(&key),
      block_(params.n + 1),
      payload_(params.payload_length()),
      threshold_(params.threshold()),
      unmasked_(params.N),
      agree_(params.m) {
  check_key(key, params);
  for (std::uint64_t k = 0; k < params.N; ++k) unmasked_[k] = static_cast<std::uint8_t>(key.z[k]);
  for (std::uint64_t j = 0; j < params.m; ++j) {
    const std::uint8_t* x = unmasked_.data() + j * block_;
    const int f = key.prf_key.eval_bits(std::span<const std::uint8_t>(x, block_ - 1));
    agree_[j] = x[block_ - 1] == f;
    statistic_ += agree_[j];
  }
}

void IncrementalDecoder::flip(std::size_t position) {
  // Input bit i lands on unpermuted coordinate pi(i).
  const std::uint64_t k = key_->pi(position);
  unmasked_[k] ^= 1u;
  if (k >= payload_) return;
  const std::uint64_t j = k / block_;
  const std::uint8_t* x = unmasked_.data() + j * block_;
  const int f = key_->prf_key.eval_bits(std::span<const std::uint8_t>(x, block_ - 1));
  const std::uint8_t now = x[block_ - 1] == f;
  statistic_ = statistic_ - agree_[j] + now;
  agree_[j] = now;
}

}  // namespace prc::sub
