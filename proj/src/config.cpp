#include "prc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace prc::config {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, Errc code) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(code, std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* name, Errc code) {
  if (!j.contains(name)) throw Error(code, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw Error(code, std::string("field '") + name + "' has the wrong type");
  }
}

template <class T>
T field_or(const json& j, const char* name, T fallback, Errc code) {
  return j.contains(name) ? field<T>(j, name, code) : fallback;
}

prf::FamilyKind parse_family_kind(const std::string& s) {
  if (s == "sparse-parity") return prf::FamilyKind::SparseParity;
  if (s == "majority-parity") return prf::FamilyKind::MajorityParity;
  if (s == "lookup-table") return prf::FamilyKind::LookupTable;
  throw Error(Errc::ParamParse, "unknown PRF family '" + s + "'");
}

sub::SubParams build_inner(const CodeSpec& c, std::uint64_t n, std::uint64_t m, std::uint64_t N) {
  if (c.inner.profile == sub::Profile::Theory) return sub::derive_params(n, c.inner.p, c.inner.q, c.c0);
  switch (c.block) {
    case CodeSpec::Block::Full: return sub::demo_params_full_block(n, m, c.inner.p, c.inner.q);
    case CodeSpec::Block::Payload: return sub::demo_params(n, m, (n + 1) * m, c.inner.p, c.inner.q);
    case CodeSpec::Block::Explicit: break;
  }
  return sub::demo_params(n, m, N, c.inner.p, c.inner.q);
}

CodeSpec parse_code(const json& j) {
  constexpr auto E = Errc::ParamParse;
  CodeSpec c;
  const auto profile = field_or<std::string>(j, "profile", "demo", E);
  if (profile != "demo" && profile != "theory") throw Error(E, "profile must be demo or theory");
  c.inner.profile = profile == "theory" ? sub::Profile::Theory : sub::Profile::Demo;
  const auto n = field<std::uint64_t>(j, "n", E);
  c.inner.p = field_or<double>(j, "p", 0.05, E);
  c.inner.q = field_or<double>(j, "q", 0.1, E);
  c.c0 = field_or<double>(j, "c0", 1.0, E);
  std::uint64_t m = 0, N = 0;
  if (c.inner.profile == sub::Profile::Demo) {
    m = field<std::uint64_t>(j, "m", E);
    if (!j.contains("N") || (j["N"].is_string() && j["N"] == "full")) {
      c.block = CodeSpec::Block::Full;
    } else if (j["N"].is_string() && j["N"] == "payload") {
      c.block = CodeSpec::Block::Payload;
    } else {
      c.block = CodeSpec::Block::Explicit;
      N = field<std::uint64_t>(j, "N", E);
    }
  }
  c.inner = build_inner(c, n, m, N);
  c.family.input_len = static_cast<std::uint32_t>(n);
  c.family.noise_level = c.inner.q;
  c.family.kind = parse_family_kind(field_or<std::string>(j, "family", "sparse-parity", E));
  c.family.locality = field_or<std::uint32_t>(j, "tau", prf::max_locality(c.family.input_len), E);
  c.rho = field_or<std::uint32_t>(j, "rho", 0, E);
  return c;
}

}  // namespace

wm::CodeParams CodeSpec::code_params() const {
  if (rho == 0) return inner;
  return idx::IdxParams::make(inner, rho);
}

CodeSpec CodeSpec::with_input_length(std::uint64_t n) const {
  CodeSpec c = *this;
  c.inner = build_inner(*this, n, inner.m, inner.N);
  c.family.input_len = static_cast<std::uint32_t>(n);
  return c;
}

KeygenSpec parse_keygen(std::string_view json_text) {
  constexpr auto E = Errc::ParamParse;
  const json j = parse_json(json_text, E);
  if (!j.is_object()) throw Error(E, "parameters must be a JSON object");
  KeygenSpec s;
  const auto kind = field<std::string>(j, "kind", E);
  if (kind == "sub") s.kind = keyfile::KeyKind::Sub;
  else if (kind == "idx") s.kind = keyfile::KeyKind::Idx;
  else if (kind == "wm") s.kind = keyfile::KeyKind::Wm;
  else throw Error(E, "kind must be sub, idx or wm");
  try {
    s.code = parse_code(j);
    s.code.family.validate();
    if (s.kind == keyfile::KeyKind::Sub) {
      s.code.rho = 0;
    } else if (s.kind == keyfile::KeyKind::Idx) {
      if (s.code.rho == 0) throw Error(E, "idx keys need rho");
    } else {
      const auto code = field_or<std::string>(j, "code", "idx", E);
      if (code == "sub") s.code.rho = 0;
      else if (code != "idx") throw Error(E, "code must be sub or idx");
      else if (s.code.rho == 0) throw Error(E, "an idx watermark code needs rho");
      s.wm.n = wm::block_length(s.code.code_params());
      s.wm.alpha = field<double>(j, "alpha", E);
      s.wm.sigma_size = field<std::uint64_t>(j, "sigma_size", E);
      s.wm.L_max = field<std::uint64_t>(j, "L_max", E);
      s.wm.profile = s.code.inner.profile;
      s.wm.validate();
    }
    if (s.code.rho != 0) idx::IdxParams::make(s.code.inner, s.code.rho);
  } catch (const Error& e) {
    if (e.code() == E || e.code() == Errc::TooLarge) throw;
    throw Error(E, e.what());
  }
  return s;
}

std::unique_ptr<lm::LanguageModel> parse_model(std::string_view json_text) {
  constexpr auto E = Errc::SpecParse;
  const json j = parse_json(json_text, E);
  if (!j.is_object()) throw Error(E, "model spec must be a JSON object");
  const auto kind = field<std::string>(j, "kind", E);
  const auto size = field<std::uint64_t>(j, "alphabet", E);
  try {
    const Alphabet alphabet(size);
    const auto terminal = field_or<Symbol>(j, "terminal", static_cast<Symbol>(size - 1), E);
    if (kind == "uniform-subset") {
      return std::make_unique<lm::UniformSubsetModel>(alphabet, terminal,
                                                      field<std::vector<Symbol>>(j, "subset", E));
    }
    if (kind == "markov") {
      return std::make_unique<lm::MarkovModel>(alphabet, terminal, field<std::vector<double>>(j, "initial", E),
                                               field<std::vector<std::vector<double>>>(j, "transitions", E));
    }
    if (kind == "fixed-length-uniform") {
      return std::make_unique<lm::FixedLengthUniformModel>(alphabet, terminal,
                                                           field<std::uint64_t>(j, "length", E));
    }
  } catch (const Error& e) {
    if (e.code() == E) throw;
    throw Error(E, e.what());
  }
  throw Error(E, "unknown model kind '" + kind + "'");
}

channel::ChannelSpec parse_channel(std::string_view json_text) {
  constexpr auto E = Errc::SpecParse;
  const json j = parse_json(json_text, E);
  if (!j.is_object()) throw Error(E, "channel spec must be a JSON object");
  channel::ChannelSpec s;
  s.kind = channel::parse_kind(field<std::string>(j, "kind", E));
  s.rate = field<double>(j, "rate", E);
  s.strategy = channel::parse_strategy(field_or<std::string>(j, "strategy", "iid-random", E));
  s.seed = Seed(field_or<std::uint64_t>(j, "seed", 0, E), "channel");
  if (j.contains("script")) {
    std::string text;
    if (j["script"].is_string()) {
      text = j["script"].get<std::string>();
    } else {
      for (const auto& line : field<std::vector<std::string>>(j, "script", E)) text += line + "\n";
    }
    s.script = channel::parse_edit_script(text);
  }
  s.psi_guess = field_or<std::vector<Symbol>>(j, "psi_guess", {}, E);
  if (j.contains("op_weights")) {
    const auto w = field<std::vector<double>>(j, "op_weights", E);
    if (w.size() != 3) throw Error(E, "op_weights needs three entries (S, I, D)");
    s.op_weights = {w[0], w[1], w[2]};
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(E, e.what());
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace prc::config
