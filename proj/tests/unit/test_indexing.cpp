#include <algorithm>
#include <map>
#include <set>

#include "helpers.hpp"
#include "prc/indexing_code.hpp"
#include "prc/stats.hpp"

using namespace prc;
using namespace prc::idx;

namespace {

const prf::LocalPrfFamily kFamily{8, 3, 0.1, prf::FamilyKind::SparseParity};

IdxParams roundtrip_params() { return IdxParams::make(sub::demo_params(8, 1024, 9 * 1024, 0.05, 0.1), 8); }

// Params whose inner block length is n_inner (n = 1, m = n_inner / 2).
IdxParams tiny(std::uint64_t n_inner, std::uint32_t rho) {
  return IdxParams::make(sub::demo_params(1, n_inner / 2, n_inner, 0.05, 0.0), rho);
}
const prf::LocalPrfFamily kTinyFamily{1, 0, 0.0, prf::FamilyKind::SparseParity};

std::set<Symbol> unique_images(std::span<const Symbol> psi, const std::vector<Symbol>& z) {
  std::set<Symbol> s;
  for (Symbol a : z) s.insert(psi[a]);
  return s;
}

std::size_t sym_diff(const std::set<Symbol>& a, const std::set<Symbol>& b) {
  std::size_t d = 0;
  for (Symbol x : a) d += !b.count(x);
  for (Symbol x : b) d += !a.count(x);
  return d;
}

}  // namespace

TEST_SUITE("indexing") {
  TEST_CASE("parameter shape") {
    const auto p = roundtrip_params();
    CHECK(p.m_out == static_cast<std::uint64_t>(std::ceil(std::log(2.0) * 9216)));
    CHECK(p.q_out == 8 * 9216);
    CHECK_ERRC(IdxParams::make(p.inner, 1), Errc::InvalidParams);
    auto bad = p;
    bad.m_out += 1;
    CHECK_ERRC(bad.validate(), Errc::InvalidParams);
  }

  TEST_CASE("keygen: balanced fibers and determinism") {
    const auto p = tiny(64, 3);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto k = keygen_idx(p, kTinyFamily, Seed(s));
      std::vector<int> sizes(64, 0);
      for (Symbol j : k.psi()) sizes[j]++;
      CHECK(std::all_of(sizes.begin(), sizes.end(), [](int c) { return c == 3; }));
      for (Symbol j = 0; j < 64; ++j) {
        for (Symbol a : k.fiber(j)) CHECK(k.psi()[a] == j);
      }
    }
    CHECK(keygen_idx(p, kTinyFamily, Seed(4)) == keygen_idx(p, kTinyFamily, Seed(4)));
    CHECK_ERRC(IdxKey(sub::SubKey{}, {0, 0, 0, 1}, 2), Errc::InvalidParams);
  }

  TEST_CASE("balanced maps with n = 2, rho = 2 are uniform") {
    const auto p = tiny(2, 2);
    std::map<std::vector<Symbol>, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < 10000; ++s) {
      const auto k = keygen_idx(p, kTinyFamily, Seed(s, "balanced"));
      counts[{k.psi().begin(), k.psi().end()}]++;
    }
    REQUIRE(counts.size() == 6);
    std::vector<std::uint64_t> obs;
    for (auto& [m, c] : counts) {
      obs.push_back(c);
      CHECK(testing::within_sigma(c, 10000, 1.0 / 6, 3.5));
    }
    CHECK(stats::chi_square_gof(obs, std::vector<double>(6, 1.0 / 6)).p_value > 0.001);
  }

  TEST_CASE("perturb_difference edge cases") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      CHECK(perturb_difference(1, 1, testing::bits("0"), Seed(s)) == SymbolString(Alphabet(1), {0}));
      CHECK(perturb_difference(1, 1, testing::bits("1"), Seed(s)) == SymbolString(Alphabet(1), {0}));
    }
    CHECK_ERRC(perturb_difference(3, 2, testing::bits("01"), Seed(1)), Errc::LengthMismatch);
    CHECK_ERRC(perturb_difference(3, 0, testing::bits("011"), Seed(1)), Errc::InvalidArgument);
  }

  TEST_CASE("perturb_difference keeps y1 when the supports already agree") {
    for (std::uint64_t s = 0; s < 200; ++s) {
      Rng rng(Seed(s, "agree"));
      Rng replay = rng;
      std::vector<Symbol> y1(5);
      std::vector<Symbol> y0(9, 0);
      for (auto& v : y1) {
        v = static_cast<Symbol>(replay.below(9));
        y0[v] = 1;
      }
      CHECK(perturb_difference(9, 5, BitString(Alphabet::binary(), y0), rng).vector() == y1);
    }
  }

  TEST_CASE("perturb_difference output support matches y0 up to the size gap") {
    Rng rng(Seed(31));
    for (int t = 0; t < 300; ++t) {
      std::vector<Symbol> y0(20);
      std::size_t s0 = 0;
      for (auto& b : y0) s0 += (b = static_cast<Symbol>(rng.below(2)));
      const auto y = perturb_difference(20, 14, BitString(Alphabet::binary(), y0), rng);
      std::set<Symbol> u(y.begin(), y.end());
      const bool subset = std::all_of(u.begin(), u.end(), [&](Symbol a) { return y0[a] == 1; });
      std::size_t covered = 0;
      for (Symbol i = 0; i < 20; ++i) covered += y0[i] && u.count(i);
      // Either Unique(y) sits inside S0, or it contains all of S0.
      CHECK((subset || covered == s0));
    }
  }

  TEST_CASE("perturb_difference is uniform at n = 4, m = 3") {
    std::vector<std::uint64_t> counts(64, 0);
    Rng rng(Seed(2024, "pd"));
    for (int t = 0; t < 100000; ++t) {
      std::vector<Symbol> y0(4);
      for (auto& b : y0) b = static_cast<Symbol>(rng.below(2));
      const auto y = perturb_difference(4, 3, BitString(Alphabet::binary(), y0), rng);
      counts[y[0] * 16 + y[1] * 4 + y[2]]++;
    }
    CHECK(stats::chi_square_gof(counts, std::vector<double>(64, 1.0 / 64)).p_value > 0.001);
  }

  TEST_CASE("encode: length, fiber membership and projection") {
    const auto p = roundtrip_params();
    const auto key = keygen_idx(p, kFamily, Seed(3));
    Rng rng(Seed(5, "enc"));
    Rng replay = rng;
    const auto z = encode_idx(key, p, rng);
    CHECK(z.size() == p.m_out);
    const auto y0 = sub::encode(key.inner_key(), p.inner, replay);
    const auto y = perturb_difference(p.inner.N, p.m_out, y0, replay);
    for (std::size_t j = 0; j < z.size(); ++j) REQUIRE(key.psi()[z[j]] == y[j]);
    std::vector<Symbol> indicator(p.inner.N, 0);
    for (Symbol s : y) indicator[s] = 1;
    CHECK(project(key.psi(), p.inner.N, z.symbols()).vector() == indicator);
  }

  TEST_CASE("project") {
    const std::vector<Symbol> psi{0, 0, 1, 1};
    CHECK(project(psi, 2, std::vector<Symbol>{2, 2}) == testing::bits("01"));
    CHECK(project(psi, 2, std::vector<Symbol>{}) == testing::bits("00"));
    CHECK(project(psi, 2, std::vector<Symbol>{1, 3}) == testing::bits("11"));
    CHECK_ERRC(project(psi, 2, std::vector<Symbol>{4}), Errc::SymbolOutOfRange);
    Rng rng(Seed(6));
    std::vector<Symbol> big_psi(60);
    for (std::size_t a = 0; a < 60; ++a) big_psi[a] = static_cast<Symbol>(a % 20);
    for (int t = 0; t < 100; ++t) {
      std::vector<Symbol> z(15);
      for (auto& s : z) s = static_cast<Symbol>(rng.below(60));
      auto shuffled = z;
      for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
      shuffled.push_back(z[rng.below(z.size())]);
      CHECK(project(big_psi, 20, z) == project(big_psi, 20, shuffled));
    }
  }

  TEST_CASE("decode: roundtrip, range errors and soundness") {
    const auto p = roundtrip_params();
    int accepted = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      const auto key = keygen_idx(p, kFamily, Seed(t, "rt-key"));
      accepted += decode_idx(key, p, encode_idx(key, p, Seed(t, "rt"))).accepted;
    }
    CHECK(accepted >= 198);
    const auto key = keygen_idx(p, kFamily, Seed(1));
    CHECK_ERRC(decode_idx(key, p, std::vector<Symbol>{static_cast<Symbol>(p.q_out)}), Errc::SymbolOutOfRange);
    CHECK_FALSE(decode_idx(key, p, std::vector<Symbol>{}).accepted);

    Rng rng(Seed(77, "fixed"));
    std::vector<Symbol> fixed(p.m_out);
    for (auto& s : fixed) s = static_cast<Symbol>(rng.below(p.q_out));
    int rejected = 0;
    for (std::uint64_t t = 0; t < 500; ++t) {
      rejected += !decode_idx(keygen_idx(p, kFamily, Seed(t, "sound")), p, fixed).accepted;
    }
    CHECK(rejected >= 495);
  }

  TEST_CASE("window decoder matches decode on every prefix") {
    const auto p = IdxParams::make(sub::demo_params(8, 64, 9 * 64, 0.05, 0.1), 4);
    const auto key = keygen_idx(p, kFamily, Seed(12));
    const auto z = encode_idx(key, p, Seed(13));
    WindowDecoder dec(key, p);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < z.size(); ++j) {
        dec.push(z[j]);
        const auto d = decode_idx(key, p, z.symbols().subspan(0, j + 1));
        REQUIRE(dec.statistic() == d.statistic);
        REQUIRE(dec.accepts() == d.accepted);
      }
      dec.clear();
      CHECK(dec.statistic() == decode_idx(key, p, std::vector<Symbol>{}).statistic);
    }
    CHECK_ERRC(dec.push(static_cast<Symbol>(p.q_out)), Errc::SymbolOutOfRange);
  }

  TEST_CASE("typical strings") {
    Rng rng(Seed(8));
    for (int t = 0; t < 50; ++t) {
      std::vector<Symbol> z(69);
      const auto v = static_cast<Symbol>(rng.below(100));
      for (auto& s : z) s = t % 2 ? v : static_cast<Symbol>(rng.below(100));
      CHECK(is_typical(SymbolString(Alphabet(100), z), 100, 69));
    }
    CHECK_FALSE(is_typical(SymbolString::filled(Alphabet(10000), 10000, 7), 10000, 10000));
    int typical = 0;
    for (int t = 0; t < 200; ++t) {
      std::vector<Symbol> z(2000);
      for (auto& s : z) s = static_cast<Symbol>(rng.below(3000));
      typical += is_typical(SymbolString(Alphabet(3000), z), 3000, 2000);
    }
    CHECK(typical >= 198);
    CHECK_ERRC(is_typical(SymbolString(Alphabet(5), {1}), 5, 2), Errc::LengthMismatch);
  }

  TEST_CASE("a single edit moves the projected set by at most 2 or 1") {
    const std::vector<Symbol> psi{0, 1, 1, 0};
    std::size_t worst_sub = 0, worst_indel = 0;
    for (std::size_t len = 1; len <= 3; ++len) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < len; ++i) total *= 4;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<Symbol> z(len);
        for (std::size_t i = 0, c = code; i < len; ++i, c /= 4) z[i] = static_cast<Symbol>(c % 4);
        const auto base = unique_images(psi, z);
        for (std::size_t pos = 0; pos <= len; ++pos) {
          for (Symbol s = 0; s < 4; ++s) {
            auto ins = z;
            ins.insert(ins.begin() + static_cast<std::ptrdiff_t>(pos), s);
            worst_indel = std::max(worst_indel, sym_diff(base, unique_images(psi, ins)));
            if (pos < len) {
              auto sub = z;
              sub[pos] = s;
              worst_sub = std::max(worst_sub, sym_diff(base, unique_images(psi, sub)));
            }
          }
          if (pos < len) {
            auto del = z;
            del.erase(del.begin() + static_cast<std::ptrdiff_t>(pos));
            worst_indel = std::max(worst_indel, sym_diff(base, unique_images(psi, del)));
          }
        }
      }
    }
    CHECK(worst_sub == 2);
    CHECK(worst_indel == 1);
  }

  TEST_CASE("projection error of perturb_difference is small") {
    const std::uint64_t n = 4096;
    const std::uint64_t m = static_cast<std::uint64_t>(std::ceil(std::log(2.0) * n));
    Rng rng(Seed(19, "eps"));
    int small = 0;
    for (int t = 0; t < 200; ++t) {
      std::vector<Symbol> y0(n);
      for (auto& b : y0) b = static_cast<Symbol>(rng.below(2));
      const auto y = perturb_difference(n, m, BitString(Alphabet::binary(), y0), rng);
      std::vector<Symbol> d(n, 0);
      for (Symbol s : y) d[s] = 1;
      small += hamming_distance(BitString(Alphabet::binary(), y0), BitString(Alphabet::binary(), d)) <= 0.03 * n;
    }
    CHECK(small >= 198);
  }

  TEST_CASE("set difference under a random balanced map stays below the bound") {
    // n = 256, eps = 0.02, p = 0.1 and rho = 8 / eps = 400; rho exceeds n^(1/4)
    // here, since the bound is vacuous at any eps large enough for a small n.
    const std::uint64_t n = 256, rho = 400, q = n * rho;
    const double eps = 0.02, p = 0.1;
    const auto z1_size = static_cast<std::uint64_t>(std::round(std::log(2.0) * n));
    const auto z2_size = static_cast<std::uint64_t>(std::floor((2 * std::log(2.0) + eps) * n));
    const auto common = static_cast<std::uint64_t>(std::ceil(p * n));
    std::vector<Symbol> z1, z2;
    for (std::uint64_t a = 0; a < z1_size; ++a) z1.push_back(static_cast<Symbol>(a));
    for (std::uint64_t a = 0; a < common; ++a) z2.push_back(static_cast<Symbol>(a));
    for (std::uint64_t a = 0; z2.size() < z2_size; ++a) z2.push_back(static_cast<Symbol>(z1_size + a));
    std::vector<Symbol> psi(q);
    for (std::uint64_t a = 0; a < q; ++a) psi[a] = static_cast<Symbol>(a / rho);
    Rng rng(Seed(23, "delta"));
    std::vector<std::size_t> deltas;
    for (int t = 0; t < 500; ++t) {
      for (std::size_t i = psi.size(); i > 1; --i) std::swap(psi[i - 1], psi[rng.below(i)]);
      deltas.push_back(sym_diff(unique_images(psi, z1), unique_images(psi, z2)));
    }
    std::sort(deltas.begin(), deltas.end());
    const double p99 = static_cast<double>(deltas[deltas.size() * 99 / 100]);
    CHECK(p99 < n * (0.5 - p / 5 + 23 * eps));
  }
}
