#include <cmath>

#include "helpers.hpp"
#include "prc/channels.hpp"
#include "prc/stats.hpp"
#include "prc/watermark.hpp"

using namespace prc;
using namespace prc::wm;

namespace {

const prf::LocalPrfFamily kFamily{8, 3, 0.1, prf::FamilyKind::SparseParity};
const prf::LocalPrfFamily kDetectFamily{4, 2, 0.0, prf::FamilyKind::SparseParity};

// Block length 1775 over 5120 symbols; m = 512 is large enough to clear the threshold.
idx::IdxParams detect_idx() { return idx::IdxParams::make(sub::demo_params(4, 512, 2560, 0.05, 0.0), 2); }

idx::IdxParams small_idx() { return idx::IdxParams::make(sub::demo_params(8, 64, 9 * 64, 0.05, 0.1), 4); }

WatermarkParams params_for(const CodeParams& cp, std::uint64_t sigma, std::uint64_t L_max) {
  WatermarkParams w;
  w.n = block_length(cp);
  w.alpha = 0.1;
  w.sigma_size = sigma;
  w.L_max = L_max;
  return w;
}

}  // namespace

TEST_SUITE("watermark") {
  TEST_CASE("params and thresholds") {
    const CodeParams cp = small_idx();
    CHECK(block_length(cp) == 400);
    CHECK(code_alphabet_size(cp) == 2304);
    CHECK(code_alphabet_size(CodeParams{sub::demo_params(4, 64, 4800, 0.05, 0)}) == 2);
    auto w = params_for(cp, 1 << 16, 100);
    CHECK(beta_threshold(w, 1000) == doctest::Approx(8 * 400 + 6 * 0.1 * 1000));
    CHECK_ERRC(beta_threshold(w, -1), Errc::InvalidArgument);
    CHECK(theory_min_alphabet(0.5, 2) == doctest::Approx(std::pow(32.0, 4.0)));
    w.alpha = 1.0;
    CHECK_ERRC(w.validate(), Errc::InvalidParams);
    w.alpha = 0.0;
    w.validate();
    w.L_max = 0;
    CHECK_ERRC(w.validate(), Errc::InvalidParams);
  }

  TEST_CASE("setup") {
    const CodeParams cp = small_idx();
    auto w = params_for(cp, 5000, 100);
    const auto key = setup(w, cp, kFamily, Seed(1));
    CHECK(key.phi.size() == 5000);
    CHECK(key.prc_alphabet == 2304);
    for (Symbol v : key.phi) CHECK(v < 2304);
    CHECK(key == setup(w, cp, kFamily, Seed(1)));
    CHECK_FALSE(key == setup(w, cp, kFamily, Seed(2)));
    w.n = 399;
    CHECK_ERRC(setup(w, cp, kFamily, Seed(1)), Errc::InvalidParams);
    w.n = 400;
    w.profile = sub::Profile::Theory;
    CHECK_ERRC(setup(w, cp, kFamily, Seed(1)), Errc::AlphabetTooSmall);
    w.alpha = 0.0;
    CHECK_ERRC(setup(w, cp, kFamily, Seed(1)), Errc::InvalidParams);
    // (8 * 2 / 0.9)^(2 / 0.9) is about 599.1.
    const CodeParams bin = sub::demo_params(4, 64, 4800, 0.05, 0);
    auto wb = params_for(bin, 600, 10);
    wb.alpha = 0.9;
    wb.profile = sub::Profile::Theory;
    setup(wb, bin, prf::LocalPrfFamily{4, 2, 0.0, prf::FamilyKind::SparseParity}, Seed(1));
    wb.sigma_size = 599;
    CHECK_ERRC(setup(wb, bin, prf::LocalPrfFamily{4, 2, 0.0, prf::FamilyKind::SparseParity}, Seed(1)),
               Errc::AlphabetTooSmall);
  }

  TEST_CASE("embedding keeps the token law") {
    const lm::TokenDistribution p(Alphabet(6), {0.05, 0.3, 0.1, 0.25, 0.2, 0.1});
    const std::vector<Symbol> phi{0, 1, 2, 0, 1, 0};
    Embedder e(phi, 3);
    Rng rng(Seed(9));
    std::vector<std::uint64_t> counts(6, 0);
    std::uint64_t hits = 0;
    const int trials = 60000;
    for (int t = 0; t < trials; ++t) {
      const auto x = static_cast<Symbol>(rng.below(3));
      const Symbol y = e.embed(x, p, rng);
      counts[y]++;
      hits += phi[y] == x;
    }
    CHECK(stats::chi_square_gof(counts, std::vector<double>(p.probs().begin(), p.probs().end())).p_value >
          0.001);
    // pbar = (.4, .5, .1): agreement probability sum min(1/3, pbar) = 1/3 + 1/3 + .1.
    CHECK(testing::within_sigma(hits, trials, 2.0 / 3 + 0.1, 4));
  }

  TEST_CASE("embedding follows the target when the fiber is heavy") {
    const lm::TokenDistribution p(Alphabet(4), {0.25, 0.25, 0.25, 0.25});
    const std::vector<Symbol> phi{0, 0, 1, 1};
    for (std::uint64_t s = 0; s < 200; ++s) {
      const Symbol x = s % 2;
      CHECK(phi[embed_token(x, p, phi, 2, Seed(s))] == x);
    }
    const auto point = lm::TokenDistribution::point_mass(Alphabet(4), 1);
    for (std::uint64_t s = 0; s < 50; ++s) CHECK(embed_token(1, point, phi, 2, Seed(s)) == 1);
    CHECK_ERRC(embed_token(2, p, phi, 2, Seed(0)), Errc::SymbolOutOfRange);
    CHECK_ERRC(embed_token(0, p, std::vector<Symbol>{0, 0, 1}, 2, Seed(0)), Errc::AlphabetMismatch);
    CHECK_ERRC(Embedder(std::vector<Symbol>{0, 3}, 2), Errc::SymbolOutOfRange);
  }

  TEST_CASE("wat output shape") {
    const CodeParams cp = small_idx();
    const auto w = params_for(cp, 1 << 12, 1000);
    const auto key = setup(w, cp, kFamily, Seed(3));
    const lm::FixedLengthUniformModel model(Alphabet(1 << 12), 0, 700);
    const auto t = wat(key, w, model, Seed(4));
    CHECK(t.size() == 701);
    CHECK(t[700] == 0);
    for (std::size_t i = 0; i < 700; ++i) REQUIRE(t[i] != 0);
    CHECK(t == wat(key, w, model, Seed(4)));
    CHECK_FALSE(t == wat(key, w, model, Seed(5)));
    auto capped = w;
    capped.L_max = 250;
    CHECK(wat(key, capped, model, Seed(4)).size() == 250);
    const lm::FixedLengthUniformModel other(Alphabet(100), 0, 10);
    CHECK_ERRC(wat(key, w, other, Seed(4)), Errc::AlphabetMismatch);
  }

  TEST_CASE("indexing-code detection") {
    const CodeParams cp = detect_idx();
    const auto w = params_for(cp, 1 << 20, 8000);
    const lm::FixedLengthUniformModel model(Alphabet(1 << 20), 0, 4000);
    int detected = 0, robust = 0, false_pos = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto key = setup(w, cp, kDetectFamily, Seed(s, "key"));
      const auto t = wat(key, w, model, Seed(s, "text"));
      const auto r = detect(key, w, t);
      detected += r.detected;
      if (r.detected) {
        REQUIRE(r.witness.has_value());
        CHECK(r.witness->second - r.witness->first + 1 <= w.n);
        CHECK(r.statistic > r.threshold);
        CHECK(r.samples == 512);
      }
      channel::ChannelSpec c;
      c.kind = channel::Kind::Edit;
      c.rate = 0.05;
      c.seed = Seed(s, "edit");
      robust += detect(key, w, channel::apply_channel(c, t)).detected;
      const auto plain = lm::sample_sequence(model, Seed(s, "plain"), 8000);
      const auto n = detect(key, w, plain);
      false_pos += n.detected;
      CHECK_FALSE(n.witness.has_value());
      CHECK(n.statistic <= n.threshold);
    }
    CHECK(detected == 20);
    CHECK(robust >= 19);
    CHECK(false_pos == 0);
  }

  TEST_CASE("binary-code detection") {
    const CodeParams cp = sub::demo_params(4, 512, 2560, 0.05, 0.0);
    const auto w = params_for(cp, 1 << 10, 20000);
    const lm::FixedLengthUniformModel model(Alphabet(1 << 10), 0, 6000);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto key = setup(w, cp, kDetectFamily, Seed(s, "bkey"));
      const auto t = wat(key, w, model, Seed(s, "btext"));
      const auto r = detect(key, w, t);
      CHECK(r.detected);
      REQUIRE(r.witness.has_value());
      CHECK(r.witness->second - r.witness->first + 1 == 2560);
      CHECK_FALSE(detect(key, w, t.substr(0, 2559)).detected);
    }
  }

  TEST_CASE("detection rejects tokens outside the alphabet") {
    const CodeParams cp = small_idx();
    const auto w = params_for(cp, 100, 10);
    const auto key = setup(w, cp, kFamily, Seed(1));
    CHECK_ERRC(detect(key, w, SymbolString(Alphabet(200), {150})), Errc::AlphabetMismatch);
    CHECK_FALSE(detect(key, w, SymbolString(Alphabet(100))).detected);
  }
}
