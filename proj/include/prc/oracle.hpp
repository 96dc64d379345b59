#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <vector>

#include "prc/core.hpp"
#include "prc/lm.hpp"

// Brute-force reference computations. Nothing here calls into the code,
// channel or watermark modules.
namespace prc::oracle {

/// Pr over uniform x and delta-noisy y of f(x) != f(y), summing all
/// (x, flip pattern) pairs. `f` is a truth table of 2^t entries, t <= 16.
long double noise_sensitivity_bruteforce(std::span<const std::uint8_t> f, long double delta);

/// 1/2 sum_i (1 - (1-2 delta)^i) W^i[f] with Fourier weights from a
/// Walsh-Hadamard transform of (-1)^f.
long double noise_sensitivity_fourier(std::span<const std::uint8_t> f, long double delta);

/// Fourier weight at each level 0..t.
std::vector<long double> fourier_levels(std::span<const std::uint8_t> f);

/// 1/2 (1 - (1-2 delta)^tau).
long double local_noise_sensitivity_bound(unsigned tau, long double delta);

/// Total variation between Bin(t, k/N) and Hyp(N, k, t).
long double tvd_binomial_hypergeometric(std::uint64_t N, std::uint64_t k, std::uint64_t t);
boost::multiprecision::cpp_rational tvd_binomial_hypergeometric_exact(std::uint64_t N, std::uint64_t k,
                                                                      std::uint64_t t);
/// 2t / sqrt(N - t), infinite at t = N.
long double tvd_bound(std::uint64_t N, std::uint64_t t);

/// Law of the rewritten string for uniform y0 in {0,1}^n, by enumerating y0,
/// y1 and every injection. Index of a string s is sum_j s_j n^(m-1-j).
std::vector<long double> perturb_difference_exact_law(unsigned n, unsigned m);

/// Law of the embedded token when the target symbol is uniform on [k].
std::vector<long double> exact_embed_marginal(std::span<const double> p, std::span<const Symbol> phi,
                                              std::uint64_t k);

struct SequenceLaw {
  std::vector<std::vector<Symbol>> sequences;
  std::vector<long double> model;        ///< Model-bar probability
  std::vector<long double> watermarked;  ///< law with i.i.d. uniform codeword symbols
};

/// Every sequence of at most `cap` tokens the model can emit (stopping after
/// the terminal), with its probability under plain and watermarked sampling.
SequenceLaw exact_sequence_law(const lm::LanguageModel& model, std::span<const Symbol> phi, std::uint64_t k,
                               std::uint64_t cap);

}  // namespace prc::oracle
