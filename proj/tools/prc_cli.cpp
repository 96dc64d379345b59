// prc: key generation, encoding, channels, watermarking and experiments.

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <iterator>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "prc/channels.hpp"
#include "prc/config.hpp"
#include "prc/experiment.hpp"
#include "prc/keyfile.hpp"
#include "prc/oracle.hpp"

namespace {

using namespace prc;

constexpr int kOk = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  return config::read_file(path);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Error(Errc::Io, "cannot open " + path + " for writing");
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) throw Error(Errc::Io, "write to " + path + " failed");
}

std::uint64_t code_alphabet(const keyfile::KeyFile& k) {
  if (std::holds_alternative<wm::SubCode>(k)) return 2;
  if (const auto* i = std::get_if<wm::IdxCode>(&k)) return i->params.q_out;
  return std::get<keyfile::WmBundle>(k).params.sigma_size;
}

struct Options {
  std::string kind;
  std::string params;
  std::string key;
  std::string out;
  std::string input;
  std::string spec;
  std::string script;
  std::string model;
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t alphabet = 0;
  std::uint64_t max_block = std::uint64_t{1} << 24;
  bool allow_large = false;
  bool timing = false;
  std::vector<std::string> oracle_args;
};

int cmd_keygen(const Options& o) {
  std::string text;
  try {
    text = config::read_file(o.params);
  } catch (const Error& e) {
    throw Error(Errc::ParamParse, e.what());
  }
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::ParamParse, "params file is not a JSON object");
  if (j.contains("kind") && j["kind"] != o.kind) {
    throw Error(Errc::ParamParse, "params file is for kind " + j["kind"].dump() + ", not " + o.kind);
  }
  j["kind"] = o.kind;
  const auto spec = config::parse_keygen(j.dump());
  if (spec.code.inner.N > o.max_block && !o.allow_large) {
    throw Error(Errc::TooLarge, "block length " + std::to_string(spec.code.inner.N) + " exceeds the guard " +
                                    std::to_string(o.max_block) + "; pass --allow-large to override");
  }
  const Seed seed(o.seed, "keygen");
  keyfile::KeyFile key;
  switch (spec.kind) {
    case keyfile::KeyKind::Sub:
      key = wm::SubCode{spec.code.inner, sub::keygen(spec.code.inner, spec.code.family, seed)};
      break;
    case keyfile::KeyKind::Idx: {
      const auto p = idx::IdxParams::make(spec.code.inner, spec.code.rho);
      key = wm::IdxCode{p, idx::keygen_idx(p, spec.code.family, seed)};
      break;
    }
    case keyfile::KeyKind::Wm:
      key = keyfile::WmBundle{spec.wm, wm::setup(spec.wm, spec.code.code_params(), spec.code.family, seed)};
      break;
  }
  keyfile::save(o.out, key);
  std::fprintf(stderr, "wrote %s key (%s) to %s\n", std::string(keyfile::kind_name(spec.kind)).c_str(),
               keyfile::is_demo(key) ? "demo" : "theory", o.out.c_str());
  return kOk;
}

int cmd_encode(const Options& o) {
  const auto key = keyfile::load(o.key);
  Rng rng(Seed(o.seed, "encode"));
  SymbolString x;
  if (const auto* s = std::get_if<wm::SubCode>(&key)) {
    x = sub::encode(s->key, s->params, rng);
  } else if (const auto* i = std::get_if<wm::IdxCode>(&key)) {
    x = idx::encode_idx(i->key, i->params, rng);
  } else {
    throw Error(Errc::KeyKindMismatch, "encode needs a sub or idx key");
  }
  write_output(o.out, to_text(x) + "\n");
  return kOk;
}

int cmd_decode(const Options& o) {
  const auto key = keyfile::load(o.key);
  sub::DecodeResult d;
  if (const auto* s = std::get_if<wm::SubCode>(&key)) {
    d = sub::decode(s->key, s->params, parse_symbols(read_input(o.input), Alphabet::binary()));
  } else if (const auto* i = std::get_if<wm::IdxCode>(&key)) {
    d = idx::decode_idx(i->key, i->params, parse_symbols(read_input(o.input), Alphabet(i->params.q_out)));
  } else {
    throw Error(Errc::KeyKindMismatch, "decode needs a sub or idx key");
  }
  std::printf("%s W=%" PRIu64 " threshold=%.6f\n", d.accepted ? "ACCEPT" : "REJECT", d.statistic, d.threshold);
  return d.accepted ? kOk : kReject;
}

int cmd_attack(const Options& o) {
  auto spec = config::parse_channel(config::read_file(o.spec));
  if (o.seed_given) spec.seed = Seed(o.seed, "channel");
  if (!o.script.empty()) {
    spec.script = channel::parse_edit_script(config::read_file(o.script));
    spec.strategy = channel::Strategy::CustomScript;
  }
  std::uint64_t q = o.alphabet;
  if (!o.key.empty()) q = code_alphabet(keyfile::load(o.key));
  if (q == 0) q = 2;
  const auto x = parse_symbols(read_input(o.input), Alphabet(q));
  const auto y = channel::apply_channel(spec, x);
  if (!channel::verify_budget(spec, x, y)) throw Error(Errc::BudgetExceeded, "channel output failed its audit");
  write_output(o.out, to_text(y) + "\n");
  return kOk;
}

const keyfile::WmBundle& wm_key(const keyfile::KeyFile& k) {
  const auto* b = std::get_if<keyfile::WmBundle>(&k);
  if (!b) throw Error(Errc::KeyKindMismatch, "command needs a wm key");
  return *b;
}

int cmd_wat(const Options& o) {
  const auto key = keyfile::load(o.key);
  const auto& b = wm_key(key);
  const auto model = config::parse_model(config::read_file(o.model));
  if (model->alphabet().size() != b.params.sigma_size) {
    throw Error(Errc::AlphabetMismatch, "model alphabet differs from the key's |Sigma|");
  }
  const auto tok = wm::wat(b.key, b.params, *model, Seed(o.seed, "wat"));
  write_output(o.out, to_text(tok) + "\n");
  return kOk;
}

int cmd_detect(const Options& o) {
  const auto key = keyfile::load(o.key);
  const auto& b = wm_key(key);
  if (!o.model.empty()) {
    const auto model = config::parse_model(config::read_file(o.model));
    if (model->alphabet().size() != b.params.sigma_size) {
      throw Error(Errc::AlphabetMismatch, "model alphabet differs from the key's |Sigma|");
    }
  }
  SymbolString tok;
  try {
    tok = parse_symbols(read_input(o.input), Alphabet(b.params.sigma_size));
  } catch (const Error& e) {
    if (e.code() == Errc::SymbolOutOfRange) throw Error(Errc::AlphabetMismatch, e.what());
    throw;
  }
  const auto r = wm::detect(b.key, b.params, tok);
  if (r.detected) {
    std::printf("DETECTED window=[%zu,%zu] statistic=%" PRIu64 " threshold=%.6f\n", r.witness->first,
                r.witness->second, r.statistic, r.threshold);
  } else {
    std::printf("NOT-DETECTED max_statistic=%" PRIu64 " threshold=%.6f\n", r.statistic, r.threshold);
  }
  return r.detected ? kOk : kReject;
}

int cmd_experiment(const Options& o) {
  const auto cfg = experiment::parse_experiment(config::read_file(o.config));
  write_output(o.out, experiment::run_experiment(cfg, o.timing));
  return kOk;
}

std::uint64_t to_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidArgument, "expected an integer, got '" + s + "'");
  }
}

std::vector<std::uint8_t> parse_table(const std::string& s) {
  std::vector<std::uint8_t> t;
  for (char c : s) {
    if (c != '0' && c != '1') throw Error(Errc::InvalidArgument, "truth table must be a 0/1 string");
    t.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return t;
}

int cmd_oracle(const Options& o) {
  const auto& a = o.oracle_args;
  auto need = [&](std::size_t k) {
    if (a.size() != k + 1) throw Error(Errc::InvalidArgument, "oracle " + a[0] + " takes " + std::to_string(k) + " arguments");
  };
  if (a.empty()) throw Error(Errc::InvalidArgument, "oracle needs a subcommand: tvd, ns, pd");
  if (a[0] == "tvd") {
    need(3);
    const auto N = to_u64(a[1]), k = to_u64(a[2]), t = to_u64(a[3]);
    const auto exact = oracle::tvd_binomial_hypergeometric_exact(N, k, t);
    std::printf("tvd=%.17Lg exact=%s bound=%.17Lg\n", oracle::tvd_binomial_hypergeometric(N, k, t),
                exact.str().c_str(), oracle::tvd_bound(N, t));
  } else if (a[0] == "ns") {
    need(2);
    const auto table = parse_table(a[1]);
    const long double delta = std::stold(a[2]);
    std::printf("bruteforce=%.17Lg fourier=%.17Lg\n", oracle::noise_sensitivity_bruteforce(table, delta),
                oracle::noise_sensitivity_fourier(table, delta));
  } else if (a[0] == "pd") {
    need(2);
    const auto law = oracle::perturb_difference_exact_law(static_cast<unsigned>(to_u64(a[1])),
                                                          static_cast<unsigned>(to_u64(a[2])));
    for (std::size_t i = 0; i < law.size(); ++i) std::printf("%zu %.17Lg\n", i, law[i]);
  } else {
    throw Error(Errc::InvalidArgument, "unknown oracle '" + a[0] + "'");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudorandom codes over large alphabets and edit-robust watermarking"};
  app.require_subcommand(1);
  Options o;

  auto seed_opt = [&](CLI::App* c) {
    c->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) {
      o.seed = v;
      o.seed_given = true;
    }, "Master seed");
  };

  auto* keygen = app.add_subcommand("keygen", "Generate a key file");
  keygen->add_option("kind", o.kind, "sub | idx | wm")->required()->check(CLI::IsMember({"sub", "idx", "wm"}));
  keygen->add_option("--params", o.params, "Parameter JSON file")->required();
  keygen->add_option("--out", o.out, "Key file to write")->required();
  keygen->add_option("--max-block-length", o.max_block, "Refuse larger block lengths");
  keygen->add_flag("--allow-large", o.allow_large, "Override the block length guard");
  seed_opt(keygen);

  auto* encode = app.add_subcommand("encode", "Print a fresh codeword");
  encode->add_option("--key", o.key)->required();
  encode->add_option("--out", o.out);
  seed_opt(encode);

  auto* decode = app.add_subcommand("decode", "Decode a received word (exit 1 on REJECT)");
  decode->add_option("--key", o.key)->required();
  decode->add_option("--input", o.input, "Input file (default stdin)");

  auto* attack = app.add_subcommand("attack", "Run a channel on a string");
  attack->add_option("--spec", o.spec, "Channel spec JSON")->required();
  attack->add_option("--script", o.script, "Edit script to replay instead of the spec's strategy");
  attack->add_option("--alphabet", o.alphabet, "Alphabet size of the input");
  attack->add_option("--key", o.key, "Take the alphabet from a key file");
  attack->add_option("--input", o.input);
  attack->add_option("--out", o.out);
  seed_opt(attack);

  auto* wat = app.add_subcommand("wat", "Generate watermarked tokens");
  wat->add_option("--key", o.key)->required();
  wat->add_option("--model", o.model, "Model spec JSON")->required();
  wat->add_option("--out", o.out);
  seed_opt(wat);

  auto* detect = app.add_subcommand("detect", "Scan tokens for a watermark (exit 1 if none)");
  detect->add_option("--key", o.key)->required();
  detect->add_option("--model", o.model, "Model spec JSON, checked for a consistent alphabet");
  detect->add_option("--input", o.input);

  auto* exp = app.add_subcommand("experiment", "Run a robustness sweep and print CSV");
  exp->add_option("--config", o.config)->required();
  exp->add_option("--out", o.out);
  exp->add_flag("--timing", o.timing, "Fill wall_ms (output is then not reproducible)");

  auto* orc = app.add_subcommand("oracle", "Reference computations: tvd N k t | ns TABLE DELTA | pd n m");
  orc->add_option("args", o.oracle_args)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*keygen) return cmd_keygen(o);
    if (*encode) return cmd_encode(o);
    if (*decode) return cmd_decode(o);
    if (*attack) return cmd_attack(o);
    if (*wat) return cmd_wat(o);
    if (*detect) return cmd_detect(o);
    if (*exp) return cmd_experiment(o);
    if (*orc) return cmd_oracle(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "prc: %s\n", e.what());
    return e.code() == Errc::Io ? kIo : kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "prc: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
