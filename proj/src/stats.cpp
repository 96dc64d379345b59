#include "prc/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <algorithm>
#include <vector>

#include "prc/error.hpp"

namespace prc::stats {

namespace {

double upper_tail(double x, unsigned dof) {
  if (dof == 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof), x));
}

// Groups consecutive bins so every group's weight reaches `min_weight`; a
// short tail joins the last full group.
std::vector<std::size_t> pool(std::span<const double> weight, double min_weight) {
  std::vector<std::size_t> group(weight.size(), 0);
  std::size_t g = 0;
  double acc = 0.0;
  std::size_t last_closed = 0;
  bool any_closed = false;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    group[i] = g;
    acc += weight[i];
    if (acc >= min_weight) {
      last_closed = g;
      any_closed = true;
      ++g;
      acc = 0.0;
    }
  }
  if (any_closed && !group.empty() && group.back() == g) {
    for (auto& x : group) {
      if (x == g) x = last_closed;
    }
  }
  return group;
}

}  // namespace

ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                         double min_expected) {
  if (observed.size() != probs.size() || observed.empty()) {
    throw Error(Errc::LengthMismatch, "observed and expected bins differ");
  }
  double total = 0;
  for (auto o : observed) total += static_cast<double>(o);
  std::vector<double> expected(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) expected[i] = probs[i] * total;
  const auto group = pool(expected, min_expected);
  const std::size_t groups = group.empty() ? 0 : *std::max_element(group.begin(), group.end()) + 1;
  std::vector<double> o(groups, 0), e(groups, 0);
  for (std::size_t i = 0; i < group.size(); ++i) {
    o[group[i]] += static_cast<double>(observed[i]);
    e[group[i]] += expected[i];
  }
  ChiSquare r;
  for (std::size_t g = 0; g < groups; ++g) {
    if (e[g] > 0) r.statistic += (o[g] - e[g]) * (o[g] - e[g]) / e[g];
  }
  r.dof = groups > 1 ? static_cast<unsigned>(groups - 1) : 0;
  r.p_value = upper_tail(r.statistic, r.dof);
  return r;
}

ChiSquare chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                double min_expected) {
  if (a.size() != b.size() || a.empty()) throw Error(Errc::LengthMismatch, "samples use different bins");
  double na = 0, nb = 0;
  for (auto x : a) na += static_cast<double>(x);
  for (auto x : b) nb += static_cast<double>(x);
  if (na == 0 || nb == 0) throw Error(Errc::InvalidArgument, "empty sample");
  const double smaller = std::min(na, nb) / (na + nb);
  std::vector<double> weight(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) weight[i] = static_cast<double>(a[i] + b[i]) * smaller;
  const auto group = pool(weight, min_expected);
  const std::size_t groups = *std::max_element(group.begin(), group.end()) + 1;
  std::vector<double> ga(groups, 0), gb(groups, 0);
  for (std::size_t i = 0; i < group.size(); ++i) {
    ga[group[i]] += static_cast<double>(a[i]);
    gb[group[i]] += static_cast<double>(b[i]);
  }
  ChiSquare r;
  const double n = na + nb;
  for (std::size_t g = 0; g < groups; ++g) {
    const double col = ga[g] + gb[g];
    if (col == 0) continue;
    const double ea = col * na / n;
    const double eb = col * nb / n;
    r.statistic += (ga[g] - ea) * (ga[g] - ea) / ea + (gb[g] - eb) * (gb[g] - eb) / eb;
  }
  r.dof = groups > 1 ? static_cast<unsigned>(groups - 1) : 0;
  r.p_value = upper_tail(r.statistic, r.dof);
  return r;
}

}  // namespace prc::stats
