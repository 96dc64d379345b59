#pragma once

#include <cstdint>
#include <span>

namespace prc::stats {

struct ChiSquare {
  double statistic = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
};

/// Goodness of fit of counts to probabilities. Adjacent bins are pooled until
/// each pooled bin expects at least `min_expected` observations.
ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                         double min_expected = 5.0);

/// Homogeneity of two count vectors over the same bins, with the same pooling
/// rule applied to the combined counts.
ChiSquare chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                double min_expected = 5.0);

}  // namespace prc::stats
