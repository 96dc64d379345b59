#include "prc/prf.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace prc::prf {

std::uint32_t max_locality(std::uint32_t input_len) noexcept {
  if (input_len <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(input_len - 1));
}

void LocalPrfFamily::validate() const {
  if (input_len == 0) throw Error(Errc::InvalidFamily, "input length must be positive");
  if (locality > max_locality(input_len)) {
    throw Error(Errc::InvalidFamily, "locality " + std::to_string(locality) +
                                         " exceeds ceil(log2 n) = " +
                                         std::to_string(max_locality(input_len)));
  }
  if (!(noise_level >= 0.0 && noise_level < 0.5)) {
    throw Error(Errc::InvalidFamily, "noise level must lie in [0, 1/2)");
  }
  if (kind == FamilyKind::MajorityParity && (locality == 0 || locality % 2 != 0)) {
    throw Error(Errc::InvalidFamily, "majority-parity needs an even, positive locality");
  }
}

namespace {

void check_support(std::uint32_t input_len, const std::vector<std::uint32_t>& support) {
  std::vector<std::uint32_t> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(Errc::InvalidFamily, "support indices must be distinct");
  }
  if (!sorted.empty() && sorted.back() >= input_len) {
    throw Error(Errc::InvalidFamily, "support index out of range");
  }
}

void check_noise(double q) {
  if (!(q >= 0.0 && q < 0.5)) throw Error(Errc::InvalidFamily, "noise level must lie in [0, 1/2)");
}

}  // namespace

PrfKey PrfKey::sparse_parity(std::uint32_t input_len, std::vector<std::uint32_t> support,
                             double noise_level) {
  check_support(input_len, support);
  check_noise(noise_level);
  PrfKey k;
  k.family_ = {input_len, static_cast<std::uint32_t>(support.size()), noise_level,
               FamilyKind::SparseParity};
  k.support_ = std::move(support);
  return k;
}

PrfKey PrfKey::majority_parity(std::uint32_t input_len, std::vector<std::uint32_t> s1,
                               std::vector<std::uint32_t> s2, double noise_level) {
  std::vector<std::uint32_t> support = s1;
  support.insert(support.end(), s2.begin(), s2.end());
  check_support(input_len, support);
  check_noise(noise_level);
  PrfKey k;
  k.family_ = {input_len, static_cast<std::uint32_t>(support.size()), noise_level,
               FamilyKind::MajorityParity};
  k.majority_size_ = static_cast<std::uint32_t>(s1.size());
  k.support_ = std::move(support);
  return k;
}

PrfKey PrfKey::lookup_table(std::uint32_t input_len, std::vector<std::uint32_t> support,
                            std::vector<std::uint8_t> table, double noise_level) {
  check_support(input_len, support);
  check_noise(noise_level);
  if (support.size() >= 32 || table.size() != (std::size_t{1} << support.size())) {
    throw Error(Errc::InvalidFamily, "lookup table must have 2^tau entries");
  }
  for (auto& t : table) {
    if (t > 1) throw Error(Errc::InvalidFamily, "lookup table entries must be bits");
  }
  PrfKey k;
  k.family_ = {input_len, static_cast<std::uint32_t>(support.size()), noise_level,
               FamilyKind::LookupTable};
  k.support_ = std::move(support);
  k.table_ = std::move(table);
  return k;
}

void PrfKey::check_input(const BitString& x) const {
  if (x.size() != family_.input_len) {
    throw Error(Errc::LengthMismatch, "PRF input has " + std::to_string(x.size()) +
                                          " bits, expected " + std::to_string(family_.input_len));
  }
  if (x.alphabet().size() != 2) throw Error(Errc::AlphabetMismatch, "PRF input must be binary");
}

int PrfKey::eval(const BitString& x) const {
  check_input(x);
  return eval_bits(x.symbols());
}

int PrfKey::eval_noisy(const BitString& x, Rng& rng) const {
  check_input(x);
  const int e = rng.bernoulli(family_.noise_level) ? 1 : 0;
  return eval_bits(x.symbols()) ^ e;
}

int PrfKey::eval_noisy(const BitString& x, const Seed& seed) const {
  Rng rng(seed);
  return eval_noisy(x, rng);
}

PrfKey sample_key(const LocalPrfFamily& family, Rng& rng) {
  family.validate();
  auto support = sample_distinct(family.input_len, family.locality, rng);
  switch (family.kind) {
    case FamilyKind::SparseParity:
      return PrfKey::sparse_parity(family.input_len, std::move(support), family.noise_level);
    case FamilyKind::MajorityParity: {
      const auto half = static_cast<std::ptrdiff_t>(family.locality / 2);
      std::vector<std::uint32_t> s1(support.begin(), support.begin() + half);
      std::vector<std::uint32_t> s2(support.begin() + half, support.end());
      return PrfKey::majority_parity(family.input_len, std::move(s1), std::move(s2),
                                     family.noise_level);
    }
    case FamilyKind::LookupTable: {
      std::vector<std::uint8_t> table(std::size_t{1} << family.locality);
      for (auto& t : table) t = static_cast<std::uint8_t>(rng.next() >> 63);
      return PrfKey::lookup_table(family.input_len, std::move(support), std::move(table),
                                  family.noise_level);
    }
  }
  throw Error(Errc::InvalidFamily, "unknown family kind");
}

PrfKey sample_key(const LocalPrfFamily& family, const Seed& seed) {
  Rng rng(seed);
  return sample_key(family, rng);
}

}  // namespace prc::prf
