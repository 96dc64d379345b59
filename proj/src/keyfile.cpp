#include "prc/keyfile.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace prc::keyfile {

namespace {

constexpr char kMagic[4] = {'P', 'R', 'C', 'K'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 32;

static_assert(std::endian::native == std::endian::little, "key files assume a little-endian host");

class Writer {
 public:
  template <class T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void bits(const SymbolString& s) {
    put<std::uint64_t>(s.size());
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      acc |= static_cast<std::uint8_t>((s[i] & 1u) << (i % 8));
      if (i % 8 == 7) {
        put(acc);
        acc = 0;
      }
    }
    if (s.size() % 8 != 0) put(acc);
  }
  void u32s(std::span<const std::uint32_t> v) {
    put<std::uint64_t>(v.size());
    for (auto x : v) put(x);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::uint64_t length() {
    const auto n = get<std::uint64_t>();
    if (n > kMaxLength) fail("length field too large");
    return n;
  }
  BitString bits() {
    const auto n = length();
    need((n + 7) / 8);
    std::vector<Symbol> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = (static_cast<std::uint8_t>(in_[pos_ + i / 8]) >> (i % 8)) & 1u;
    }
    pos_ += (n + 7) / 8;
    return BitString::trusted(Alphabet::binary(), std::move(v));
  }
  std::vector<std::uint32_t> u32s() {
    const auto n = length();
    need(n * 4);
    std::vector<std::uint32_t> v(n);
    for (auto& x : v) x = get<std::uint32_t>();
    return v;
  }
  void finish() const {
    if (pos_ != in_.size()) fail("trailing bytes");
  }
  [[noreturn]] static void fail(const std::string& what) { throw Error(Errc::KeyFormat, what); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) fail("truncated key file");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

void put_sub_params(Writer& w, const sub::SubParams& p) {
  w.put<std::uint64_t>(p.n);
  w.put<std::uint64_t>(p.m);
  w.put<std::uint64_t>(p.N);
  w.put<double>(p.p);
  w.put<double>(p.q);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(p.profile));
}

sub::SubParams get_sub_params(Reader& r) {
  sub::SubParams p;
  p.n = r.get<std::uint64_t>();
  p.m = r.get<std::uint64_t>();
  p.N = r.get<std::uint64_t>();
  p.p = r.get<double>();
  p.q = r.get<double>();
  const auto prof = r.get<std::uint8_t>();
  if (prof > 1) Reader::fail("bad profile");
  p.profile = static_cast<sub::Profile>(prof);
  return p;
}

void put_sub(Writer& w, const wm::SubCode& c) {
  put_sub_params(w, c.params);
  const auto& k = c.key.prf_key;
  w.put<std::uint8_t>(static_cast<std::uint8_t>(k.family().kind));
  w.put<std::uint32_t>(k.family().input_len);
  w.put<double>(k.family().noise_level);
  w.put<std::uint32_t>(k.majority_size());
  w.u32s(k.support());
  w.bits(BitString::trusted(Alphabet::binary(), {k.table().begin(), k.table().end()}));
  w.bits(c.key.z);
  w.u32s(c.key.pi.forward());
}

wm::SubCode get_sub(Reader& r) {
  wm::SubCode c;
  c.params = get_sub_params(r);
  const auto kind = r.get<std::uint8_t>();
  const auto n = r.get<std::uint32_t>();
  const auto q = r.get<double>();
  const auto s1 = r.get<std::uint32_t>();
  auto support = r.u32s();
  const auto table_bits = r.bits();
  std::vector<std::uint8_t> table(table_bits.begin(), table_bits.end());
  switch (static_cast<prf::FamilyKind>(kind)) {
    case prf::FamilyKind::SparseParity:
      c.key.prf_key = prf::PrfKey::sparse_parity(n, std::move(support), q);
      break;
    case prf::FamilyKind::MajorityParity: {
      if (s1 > support.size()) Reader::fail("bad majority size");
      std::vector<std::uint32_t> a(support.begin(), support.begin() + s1);
      std::vector<std::uint32_t> b(support.begin() + s1, support.end());
      c.key.prf_key = prf::PrfKey::majority_parity(n, std::move(a), std::move(b), q);
      break;
    }
    case prf::FamilyKind::LookupTable:
      c.key.prf_key = prf::PrfKey::lookup_table(n, std::move(support), std::move(table), q);
      break;
    default: Reader::fail("unknown PRF family");
  }
  c.key.z = r.bits();
  c.key.pi = Permutation(r.u32s());
  c.params.validate();
  if (c.key.z.size() != c.params.N || c.key.pi.size() != c.params.N || n != c.params.n) {
    Reader::fail("key does not match its parameters");
  }
  return c;
}

void put_idx(Writer& w, const wm::IdxCode& c) {
  put_sub(w, wm::SubCode{c.params.inner, c.key.inner_key()});
  w.put<std::uint32_t>(c.params.rho);
  w.put<std::uint64_t>(c.params.m_out);
  w.put<std::uint64_t>(c.params.q_out);
  w.u32s(c.key.psi());
}

wm::IdxCode get_idx(Reader& r) {
  auto inner = get_sub(r);
  wm::IdxCode c;
  c.params.inner = inner.params;
  c.params.rho = r.get<std::uint32_t>();
  c.params.m_out = r.get<std::uint64_t>();
  c.params.q_out = r.get<std::uint64_t>();
  c.params.validate();
  auto psi = r.u32s();
  if (psi.size() != c.params.q_out) Reader::fail("psi length does not match q_out");
  c.key = idx::IdxKey(std::move(inner.key), std::move(psi), c.params.inner.N);
  return c;
}

bool code_demo(const wm::PrcCode& c) {
  const auto& p = std::holds_alternative<wm::SubCode>(c) ? std::get<wm::SubCode>(c).params
                                                         : std::get<wm::IdxCode>(c).params.inner;
  return p.profile == sub::Profile::Demo;
}

}  // namespace

std::string_view kind_name(KeyKind k) noexcept {
  switch (k) {
    case KeyKind::Sub: return "sub";
    case KeyKind::Idx: return "idx";
    case KeyKind::Wm: return "wm";
  }
  return "?";
}

KeyKind kind_of(const KeyFile& k) noexcept {
  return static_cast<KeyKind>(k.index() + 1);
}

bool is_demo(const KeyFile& k) noexcept {
  if (const auto* s = std::get_if<wm::SubCode>(&k)) return s->params.profile == sub::Profile::Demo;
  if (const auto* i = std::get_if<wm::IdxCode>(&k)) return i->params.inner.profile == sub::Profile::Demo;
  const auto& b = std::get<WmBundle>(k);
  return b.params.profile == sub::Profile::Demo || code_demo(b.key.code);
}

std::string serialize(const KeyFile& key) {
  Writer w;
  for (char c : kMagic) w.put(c);
  w.put(kVersion);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(kind_of(key)));
  w.put<std::uint8_t>(is_demo(key) ? 1 : 0);
  if (const auto* s = std::get_if<wm::SubCode>(&key)) {
    put_sub(w, *s);
  } else if (const auto* i = std::get_if<wm::IdxCode>(&key)) {
    put_idx(w, *i);
  } else {
    const auto& b = std::get<WmBundle>(key);
    const bool is_idx = std::holds_alternative<wm::IdxCode>(b.key.code);
    w.put<std::uint8_t>(is_idx ? 2 : 1);
    if (is_idx) put_idx(w, std::get<wm::IdxCode>(b.key.code));
    else put_sub(w, std::get<wm::SubCode>(b.key.code));
    w.put<std::uint64_t>(b.params.n);
    w.put<double>(b.params.alpha);
    w.put<std::uint64_t>(b.params.sigma_size);
    w.put<std::uint64_t>(b.params.L_max);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(b.params.profile));
    w.put<std::uint64_t>(b.key.prc_alphabet);
    w.u32s(b.key.phi);
  }
  return w.take();
}

KeyFile deserialize(std::string_view bytes) {
  try {
    Reader r(bytes);
    for (char c : kMagic) {
      if (r.get<char>() != c) Reader::fail("not a key file");
    }
    if (r.get<std::uint16_t>() != kVersion) Reader::fail("unsupported key file version");
    const auto kind = r.get<std::uint8_t>();
    r.get<std::uint8_t>();  // flags, recomputed from the parameters
    KeyFile out;
    switch (kind) {
      case 1: out = get_sub(r); break;
      case 2: out = get_idx(r); break;
      case 3: {
        WmBundle b;
        const auto code = r.get<std::uint8_t>();
        if (code == 1) b.key.code = get_sub(r);
        else if (code == 2) b.key.code = get_idx(r);
        else Reader::fail("unknown watermark code kind");
        b.params.n = r.get<std::uint64_t>();
        b.params.alpha = r.get<double>();
        b.params.sigma_size = r.get<std::uint64_t>();
        b.params.L_max = r.get<std::uint64_t>();
        const auto prof = r.get<std::uint8_t>();
        if (prof > 1) Reader::fail("bad profile");
        b.params.profile = static_cast<sub::Profile>(prof);
        b.key.prc_alphabet = r.get<std::uint64_t>();
        b.key.phi = r.u32s();
        b.params.validate();
        if (b.key.phi.size() != b.params.sigma_size) Reader::fail("phi length does not match |Sigma|");
        for (auto v : b.key.phi) {
          if (v >= b.key.prc_alphabet) Reader::fail("phi value out of range");
        }
        out = std::move(b);
        break;
      }
      default: Reader::fail("unknown key kind");
    }
    r.finish();
    return out;
  } catch (const Error& e) {
    if (e.code() == Errc::KeyFormat) throw;
    throw Error(Errc::KeyFormat, e.what());
  }
}

void save(const std::string& path, const KeyFile& key) {
  const std::string bytes = serialize(key);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write to " + path + " failed");
}

KeyFile load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace prc::keyfile
