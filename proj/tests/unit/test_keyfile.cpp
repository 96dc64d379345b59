#include <cstdio>
#include <filesystem>

#include "helpers.hpp"
#include "prc/keyfile.hpp"

using namespace prc;
using namespace prc::keyfile;

namespace {

const prf::LocalPrfFamily kFamily{8, 3, 0.1, prf::FamilyKind::SparseParity};

wm::SubCode sub_code(prf::FamilyKind kind = prf::FamilyKind::SparseParity) {
  const auto p = sub::demo_params(8, 64, 9 * 64, 0.05, 0.1);
  prf::LocalPrfFamily fam = kFamily;
  fam.kind = kind;
  if (kind == prf::FamilyKind::MajorityParity) fam.locality = 2;
  return {p, sub::keygen(p, fam, Seed(1))};
}

wm::IdxCode idx_code() {
  const auto p = idx::IdxParams::make(sub::demo_params(8, 64, 9 * 64, 0.05, 0.1), 3);
  return {p, idx::keygen_idx(p, kFamily, Seed(2))};
}

WmBundle wm_bundle() {
  const auto c = idx_code();
  wm::WatermarkParams w;
  w.n = c.params.m_out;
  w.alpha = 0.25;
  w.sigma_size = 3000;
  w.L_max = 999;
  return {w, wm::setup(w, c.params, kFamily, Seed(3))};
}

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_SUITE("keyfile") {
  TEST_CASE("round trips") {
    for (auto kind : {prf::FamilyKind::SparseParity, prf::FamilyKind::MajorityParity, prf::FamilyKind::LookupTable}) {
      const KeyFile k = sub_code(kind);
      CHECK(deserialize(serialize(k)) == k);
    }
    const KeyFile i = idx_code();
    CHECK(deserialize(serialize(i)) == i);
    const KeyFile w = wm_bundle();
    CHECK(deserialize(serialize(w)) == w);
    CHECK(kind_of(i) == KeyKind::Idx);
    CHECK(kind_of(w) == KeyKind::Wm);
    CHECK(is_demo(i));
    CHECK(kind_name(KeyKind::Sub) == "sub");
  }

  TEST_CASE("layout header") {
    const auto bytes = serialize(KeyFile{sub_code()});
    REQUIRE(bytes.size() > 8);
    CHECK(bytes.substr(0, 4) == "PRCK");
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 0);
    CHECK(bytes[6] == 1);
    CHECK(bytes[7] == 1);
  }

  TEST_CASE("malformed input") {
    const auto bytes = serialize(KeyFile{idx_code()});
    CHECK_ERRC(deserialize(""), Errc::KeyFormat);
    CHECK_ERRC(deserialize("XRCK" + bytes.substr(4)), Errc::KeyFormat);
    auto version = bytes;
    version[4] = 9;
    CHECK_ERRC(deserialize(version), Errc::KeyFormat);
    auto kind = bytes;
    kind[6] = 7;
    CHECK_ERRC(deserialize(kind), Errc::KeyFormat);
    for (std::size_t cut : {std::size_t{8}, bytes.size() / 2, bytes.size() - 1}) {
      CHECK_ERRC(deserialize(bytes.substr(0, cut)), Errc::KeyFormat);
    }
    CHECK_ERRC(deserialize(bytes + "x"), Errc::KeyFormat);
    // Truncated or corrupted input must never crash.
    Rng rng(Seed(5));
    for (int t = 0; t < 300; ++t) {
      auto b = bytes;
      b[8 + rng.below(b.size() - 8)] = static_cast<char>(rng.below(256));
      try {
        (void)deserialize(b);
      } catch (const Error& e) {
        CHECK(e.code() == Errc::KeyFormat);
      }
    }
  }

  TEST_CASE("files") {
    const auto path = temp_path("prc_keyfile_test.key");
    const KeyFile k = wm_bundle();
    save(path, k);
    CHECK(load(path) == k);
    std::remove(path.c_str());
    CHECK_ERRC(load(path), Errc::Io);
    CHECK_ERRC(save("/nonexistent-dir/x.key", k), Errc::Io);
  }
}
