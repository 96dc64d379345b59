#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "prc/core.hpp"
#include "prc/error.hpp"

namespace testing {

inline prc::BitString bits(const std::string& s) { return prc::parse_symbols(s, prc::Alphabet::binary()); }

/// Lower-case letters as symbols 0..25.
inline prc::SymbolString word(const std::string& s) {
  std::vector<prc::Symbol> v;
  for (char c : s) v.push_back(static_cast<prc::Symbol>(c - 'a'));
  return prc::SymbolString(prc::Alphabet(26), v);
}

/// |k - n p| within `sigmas` binomial standard deviations.
inline bool within_sigma(double k, double n, double p, double sigmas = 3.0) {
  return std::fabs(k - n * p) <= sigmas * std::sqrt(n * p * (1 - p));
}

}  // namespace testing

#define CHECK_ERRC(expr, errc)                          \
  do {                                                  \
    bool thrown_ = false;                               \
    try {                                               \
      (void)(expr);                                     \
    } catch (const prc::Error& e_) {                    \
      thrown_ = true;                                   \
      CHECK_MESSAGE(e_.code() == (errc), e_.what());    \
    }                                                   \
    CHECK_MESSAGE(thrown_, "expected " #errc);          \
  } while (0)
