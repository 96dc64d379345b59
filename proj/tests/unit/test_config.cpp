#include "helpers.hpp"
#include "prc/config.hpp"

using namespace prc;
using namespace prc::config;

TEST_SUITE("config") {
  TEST_CASE("keygen specs") {
    const auto s = parse_keygen(R"({"kind": "sub", "n": 8, "m": 256})");
    CHECK(s.kind == keyfile::KeyKind::Sub);
    CHECK(s.code.inner.N == 3 * 256 * 81);
    CHECK(s.code.inner.p == 0.05);
    CHECK(s.code.inner.q == 0.1);
    CHECK(s.code.family.locality == 3);
    CHECK(s.code.family.kind == prf::FamilyKind::SparseParity);
    CHECK(parse_keygen(R"({"kind": "sub", "n": 8, "m": 256, "N": "payload"})").code.inner.N == 9 * 256);
    CHECK(parse_keygen(R"({"kind": "sub", "n": 8, "m": 256, "N": 3000})").code.inner.N == 3000);
    const auto i = parse_keygen(R"({"kind": "idx", "n": 4, "m": 512, "N": "payload", "q": 0, "tau": 2, "rho": 2})");
    CHECK(std::get<idx::IdxParams>(i.code.code_params()).m_out == 1775);
    const auto t = parse_keygen(R"({"kind": "sub", "profile": "theory", "n": 8, "p": 0.01, "q": 0.1})");
    CHECK(t.code.inner == sub::derive_params(8, 0.01, 0.1, 1.0));
    const auto w = parse_keygen(
        R"({"kind": "wm", "n": 4, "m": 512, "N": "payload", "q": 0, "rho": 2, "alpha": 0.1, "sigma_size": 65536, "L_max": 5000})");
    CHECK(w.wm.n == 1775);
    CHECK(w.wm.sigma_size == 65536);
    const auto ws = parse_keygen(
        R"({"kind": "wm", "code": "sub", "n": 4, "m": 64, "N": 4800, "alpha": 0.1, "sigma_size": 4, "L_max": 10})");
    CHECK(ws.code.rho == 0);
    CHECK(ws.wm.n == 4800);
  }

  TEST_CASE("keygen spec errors") {
    for (const char* bad : {"{", "[]", R"({"n": 8, "m": 4})", R"({"kind": "foo", "n": 8, "m": 4})",
                            R"({"kind": "sub", "m": 4})", R"({"kind": "sub", "n": "eight", "m": 4})",
                            R"({"kind": "sub", "n": 8})", R"({"kind": "idx", "n": 8, "m": 4})",
                            R"({"kind": "sub", "n": 8, "m": 4, "N": 5})",
                            R"({"kind": "sub", "n": 8, "m": 4, "family": "aes"})",
                            R"({"kind": "sub", "n": 8, "m": 4, "tau": 9})",
                            R"({"kind": "sub", "n": 8, "m": 4, "profile": "fast"})",
                            R"({"kind": "wm", "n": 8, "m": 64, "rho": 2, "sigma_size": 10, "L_max": 5})",
                            R"({"kind": "wm", "n": 8, "m": 64, "rho": 2, "alpha": 1.5, "sigma_size": 10, "L_max": 5})"}) {
      CAPTURE(std::string(bad));
      CHECK_ERRC(parse_keygen(bad), Errc::ParamParse);
    }
  }

  TEST_CASE("model specs") {
    const auto u = parse_model(R"({"kind": "uniform-subset", "alphabet": 5, "subset": [1, 2]})");
    CHECK(u->terminal() == 4);
    CHECK(u->distribution(u->initial())[1] == doctest::Approx(0.5));
    const auto m = parse_model(
        R"({"kind": "markov", "alphabet": 2, "terminal": 1, "initial": [0.5, 0.5], "transitions": [[0.9, 0.1], [0, 1]]})");
    CHECK(m->next(SymbolString(Alphabet(2), {0}))[1] == doctest::Approx(0.1));
    const auto f = parse_model(R"({"kind": "fixed-length-uniform", "alphabet": 16, "terminal": 0, "length": 7})");
    CHECK(lm::sample_sequence(*f, Seed(1), 100).size() == 8);
    for (const char* bad : {"nope", R"({"kind": "gpt", "alphabet": 4})", R"({"kind": "markov", "alphabet": 2})",
                            R"({"kind": "uniform-subset", "alphabet": 5, "subset": [9]})",
                            R"({"kind": "fixed-length-uniform", "alphabet": 1, "length": 3})",
                            R"({"kind": "fixed-length-uniform", "alphabet": 4, "terminal": 4, "length": 3})"}) {
      CAPTURE(std::string(bad));
      CHECK_ERRC(parse_model(bad), Errc::SpecParse);
    }
  }

  TEST_CASE("channel specs") {
    const auto c = parse_channel(R"({"kind": "edit", "rate": 0.1, "seed": 4})");
    CHECK(c.kind == channel::Kind::Edit);
    CHECK(c.strategy == channel::Strategy::IidRandom);
    CHECK(c.seed == Seed(4, "channel"));
    const auto s = parse_channel(R"({"kind": "edit", "rate": 0.5, "strategy": "custom-script", "script": ["S 0 1", "D 2"]})");
    REQUIRE(s.script.size() == 2);
    CHECK(s.script[1].type == channel::EditOp::Type::Delete);
    const auto t = parse_channel(R"({"kind": "edit", "rate": 0.5, "strategy": "custom-script", "script": "I 0 3\n"})");
    CHECK(t.script.size() == 1);
    const auto w = parse_channel(R"({"kind": "edit", "rate": 0.5, "op_weights": [0, 1, 2], "psi_guess": [0, 0, 1]})");
    CHECK(w.op_weights[2] == 2.0);
    CHECK(w.psi_guess.size() == 3);
    for (const char* bad : {"", R"({"rate": 0.1})", R"({"kind": "edit"})", R"({"kind": "erase", "rate": 0.1})",
                            R"({"kind": "edit", "rate": 2})", R"({"kind": "substitution", "rate": 0.1, "strategy": "duplication"})",
                            R"({"kind": "edit", "rate": 0.1, "script": ["Q 1"]})",
                            R"({"kind": "edit", "rate": 0.1, "op_weights": [1, 1]})"}) {
      CAPTURE(std::string(bad));
      CHECK_ERRC(parse_channel(bad), Errc::SpecParse);
    }
  }

  TEST_CASE("files") {
    CHECK_ERRC(read_file("/nonexistent/params.json"), Errc::Io);
  }

  TEST_CASE("input length override") {
    const auto s = parse_keygen(R"({"kind": "sub", "n": 8, "m": 100, "N": "payload"})");
    const auto t = s.code.with_input_length(12);
    CHECK(t.inner.n == 12);
    CHECK(t.inner.N == 13 * 100);
    CHECK(t.family.input_len == 12);
  }
}
