#include "prc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace prc::oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

unsigned table_bits(std::span<const std::uint8_t> f) {
  if (f.empty() || !std::has_single_bit(f.size())) {
    throw Error(Errc::InvalidArgument, "truth table size must be a power of two");
  }
  const auto t = static_cast<unsigned>(std::countr_zero(f.size()));
  if (t > 16) throw Error(Errc::TooLarge, "truth tables above 16 bits");
  return t;
}

void check_delta(long double delta) {
  if (!(delta >= 0 && delta <= 1)) throw Error(Errc::InvalidArgument, "delta must lie in [0,1]");
}

long double choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  long double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return std::round(r);
}

cpp_int choose_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  cpp_int r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_tvd_args(std::uint64_t N, std::uint64_t k, std::uint64_t t) {
  if (N == 0 || k > N || t > N) throw Error(Errc::InvalidParams, "need N >= 1, k <= N and t <= N");
}

}  // namespace

long double noise_sensitivity_bruteforce(std::span<const std::uint8_t> f, long double delta) {
  const unsigned t = table_bits(f);
  check_delta(delta);
  const std::size_t size = f.size();
  long double total = 0;
  for (std::size_t e = 0; e < size; ++e) {
    const int w = std::popcount(e);
    const long double weight = std::pow(delta, w) * std::pow(1 - delta, static_cast<int>(t) - w);
    std::size_t disagree = 0;
    for (std::size_t x = 0; x < size; ++x) disagree += (f[x] & 1) != (f[x ^ e] & 1);
    total += weight * static_cast<long double>(disagree);
  }
  return total / static_cast<long double>(size);
}

std::vector<long double> fourier_levels(std::span<const std::uint8_t> f) {
  const unsigned t = table_bits(f);
  std::vector<long double> h(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) h[x] = (f[x] & 1) ? -1 : 1;
  for (std::size_t len = 1; len < h.size(); len <<= 1) {
    for (std::size_t i = 0; i < h.size(); i += 2 * len) {
      for (std::size_t j = i; j < i + len; ++j) {
        const long double a = h[j];
        const long double b = h[j + len];
        h[j] = a + b;
        h[j + len] = a - b;
      }
    }
  }
  std::vector<long double> levels(t + 1, 0);
  const long double scale = static_cast<long double>(h.size());
  for (std::size_t s = 0; s < h.size(); ++s) {
    const long double c = h[s] / scale;
    levels[std::popcount(s)] += c * c;
  }
  return levels;
}

long double noise_sensitivity_fourier(std::span<const std::uint8_t> f, long double delta) {
  check_delta(delta);
  const auto levels = fourier_levels(f);
  long double ns = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ns += (1 - std::pow(1 - 2 * delta, static_cast<int>(i))) * levels[i];
  }
  return ns / 2;
}

long double local_noise_sensitivity_bound(unsigned tau, long double delta) {
  check_delta(delta);
  return (1 - std::pow(1 - 2 * delta, static_cast<int>(tau))) / 2;
}

long double tvd_binomial_hypergeometric(std::uint64_t N, std::uint64_t k, std::uint64_t t) {
  check_tvd_args(N, k, t);
  const long double p = static_cast<long double>(k) / static_cast<long double>(N);
  const long double total = choose(N, t);
  long double tv = 0;
  for (std::uint64_t i = 0; i <= t; ++i) {
    const long double bin = choose(t, i) * std::pow(p, static_cast<int>(i)) * std::pow(1 - p, static_cast<int>(t - i));
    const long double hyp = (i <= k && t - i <= N - k) ? choose(k, i) * choose(N - k, t - i) / total : 0;
    tv += std::fabs(bin - hyp);
  }
  return tv / 2;
}

cpp_rational tvd_binomial_hypergeometric_exact(std::uint64_t N, std::uint64_t k, std::uint64_t t) {
  check_tvd_args(N, k, t);
  const cpp_rational p = cpp_rational(cpp_int(k), cpp_int(N));
  const cpp_int total = choose_exact(N, t);
  cpp_rational tv = 0;
  for (std::uint64_t i = 0; i <= t; ++i) {
    cpp_rational bin = cpp_rational(choose_exact(t, i));
    for (std::uint64_t a = 0; a < i; ++a) bin *= p;
    for (std::uint64_t a = 0; a < t - i; ++a) bin *= 1 - p;
    cpp_rational hyp = 0;
    if (i <= k && t - i <= N - k) hyp = cpp_rational(choose_exact(k, i) * choose_exact(N - k, t - i), total);
    tv += bin > hyp ? bin - hyp : hyp - bin;
  }
  return tv / 2;
}

long double tvd_bound(std::uint64_t N, std::uint64_t t) {
  if (t > N) throw Error(Errc::InvalidParams, "need t <= N");
  if (t == N) return std::numeric_limits<long double>::infinity();
  return 2.0L * static_cast<long double>(t) / std::sqrt(static_cast<long double>(N - t));
}

namespace {

// Calls visit(image, weight) for every injection of `from` into `to`, each with
// weight 1 / (|to|! / (|to| - |from|)!).
template <class Visit>
void for_each_injection(const std::vector<unsigned>& from, const std::vector<unsigned>& to, Visit&& visit) {
  long double count = 1;
  for (std::size_t i = 0; i < from.size(); ++i) count *= static_cast<long double>(to.size() - i);
  std::vector<unsigned> image;
  std::vector<bool> used(to.size(), false);
  auto rec = [&](auto&& self) -> void {
    if (image.size() == from.size()) {
      visit(image, 1 / count);
      return;
    }
    for (std::size_t c = 0; c < to.size(); ++c) {
      if (used[c]) continue;
      used[c] = true;
      image.push_back(to[c]);
      self(self);
      image.pop_back();
      used[c] = false;
    }
  };
  rec(rec);
}

}  // namespace

std::vector<long double> perturb_difference_exact_law(unsigned n, unsigned m) {
  if (n == 0 || m == 0) throw Error(Errc::InvalidArgument, "n and m must be positive");
  if (n > 4 || m > 4) throw Error(Errc::TooLarge, "exact law enumerated only for n, m <= 4");
  std::size_t strings = 1;
  for (unsigned i = 0; i < m; ++i) strings *= n;
  std::vector<long double> law(strings, 0);
  const long double base = 1.0L / static_cast<long double>((std::size_t{1} << n) * strings);
  std::vector<unsigned> y1(m);
  for (std::size_t y0 = 0; y0 < (std::size_t{1} << n); ++y0) {
    for (std::size_t code = 0; code < strings; ++code) {
      std::size_t c = code;
      for (unsigned j = m; j-- > 0;) {
        y1[j] = static_cast<unsigned>(c % n);
        c /= n;
      }
      std::vector<bool> in1(n, false);
      for (unsigned s : y1) in1[s] = true;
      std::vector<unsigned> a, b;  // S0 \ S1, S1 \ S0
      for (unsigned i = 0; i < n; ++i) {
        const bool in0 = (y0 >> i) & 1;
        if (in0 && !in1[i]) a.push_back(i);
        if (!in0 && in1[i]) b.push_back(i);
      }
      auto emit = [&](const std::vector<unsigned>& rename, long double w) {
        std::size_t idx = 0;
        for (unsigned s : y1) idx = idx * n + rename[s];
        law[idx] += base * w;
      };
      std::vector<unsigned> rename(n);
      std::iota(rename.begin(), rename.end(), 0u);
      if (a.size() >= b.size()) {
        for_each_injection(b, a, [&](const std::vector<unsigned>& img, long double w) {
          auto r = rename;
          for (std::size_t i = 0; i < b.size(); ++i) r[b[i]] = img[i];
          emit(r, w);
        });
      } else {
        for_each_injection(a, b, [&](const std::vector<unsigned>& img, long double w) {
          auto r = rename;
          for (std::size_t i = 0; i < a.size(); ++i) r[img[i]] = a[i];
          emit(r, w);
        });
      }
    }
  }
  return law;
}

std::vector<long double> exact_embed_marginal(std::span<const double> p, std::span<const Symbol> phi,
                                              std::uint64_t k) {
  if (p.size() != phi.size()) throw Error(Errc::LengthMismatch, "phi must cover the alphabet");
  if (p.size() > 8 || k > 4) throw Error(Errc::TooLarge, "enumeration limited to |Sigma| <= 8, k <= 4");
  if (k == 0) throw Error(Errc::InvalidArgument, "empty code alphabet");
  std::vector<long double> pbar(k, 0);
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (phi[s] >= k) throw Error(Errc::SymbolOutOfRange, "phi value out of range");
    pbar[phi[s]] += p[s];
  }
  const long double K = static_cast<long double>(k);
  std::vector<long double> residual(k);
  long double residual_total = 0;
  for (std::uint64_t y = 0; y < k; ++y) {
    residual[y] = std::max<long double>(0, pbar[y] - 1 / K);
    residual_total += residual[y];
  }
  // Law of the selected code symbol y, averaged over uniform x.
  std::vector<long double> ylaw(k, 0);
  for (std::uint64_t x = 0; x < k; ++x) {
    const long double keep = std::min<long double>(1, K * pbar[x]);
    ylaw[x] += keep / K;
    if (residual_total > 1e-12L) {
      for (std::uint64_t y = 0; y < k; ++y) ylaw[y] += (1 - keep) * residual[y] / residual_total / K;
    } else {
      ylaw[x] += (1 - keep) / K;
    }
  }
  std::vector<long double> out(p.size(), 0);
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] > 0) out[s] = ylaw[phi[s]] * p[s] / pbar[phi[s]];
  }
  return out;
}

SequenceLaw exact_sequence_law(const lm::LanguageModel& model, std::span<const Symbol> phi, std::uint64_t k,
                               std::uint64_t cap) {
  if (cap == 0 || cap > 6) throw Error(Errc::TooLarge, "sequence enumeration limited to 1..6 tokens");
  const std::uint64_t sigma = model.alphabet().size();
  SequenceLaw law;
  std::vector<Symbol> prefix;
  auto rec = [&](auto&& self, lm::LanguageModel::State state, long double pm, long double pw) -> void {
    const auto& dist = model.distribution(state);
    const auto wlaw = exact_embed_marginal(dist.probs(), phi, k);
    for (std::uint64_t s = 0; s < sigma; ++s) {
      const long double qm = dist[static_cast<Symbol>(s)];
      const long double qw = wlaw[s];
      if (qm == 0 && qw == 0) continue;
      prefix.push_back(static_cast<Symbol>(s));
      if (s == model.terminal() || prefix.size() == cap) {
        law.sequences.push_back(prefix);
        law.model.push_back(pm * qm);
        law.watermarked.push_back(pw * qw);
      } else {
        self(self, model.advance(state, static_cast<Symbol>(s)), pm * qm, pw * qw);
      }
      prefix.pop_back();
    }
  };
  rec(rec, model.initial(), 1, 1);
  return law;
}

}  // namespace prc::oracle
