#include "prc/experiment.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace prc::experiment {

using nlohmann::json;

ExperimentConfig parse_experiment(std::string_view json_text) {
  constexpr auto E = Errc::ConfigParse;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(E, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(E, "config must be a JSON object");
  ExperimentConfig c;
  try {
    const auto target = j.at("target").get<std::string>();
    if (target == "sub") c.target = Target::Sub;
    else if (target == "idx") c.target = Target::Idx;
    else if (target == "wm") c.target = Target::Wm;
    else throw Error(E, "target must be sub, idx or wm");
    c.seed = j.value("seed", std::uint64_t{0});
    c.trials = j.at("trials").get<std::uint64_t>();
    c.fp_trials = j.value("fp_trials", c.trials);
    json code = j.at("code");
    code["kind"] = "sub";
    c.code = config::parse_keygen(code.dump()).code;
    c.code.rho = code.value("rho", 0u);
    if (c.target != Target::Sub && c.code.rho == 0) throw Error(E, "idx and wm targets need code.rho");
    if (c.target == Target::Sub) c.code.rho = 0;
    if (c.target == Target::Wm) {
      c.model_json = j.at("model").dump();
      config::parse_model(c.model_json);
      c.L_max = j.value("L_max", std::uint64_t{0});
    }
    json ch = j.value("channel", json::object());
    if (!ch.contains("kind")) ch["kind"] = c.target == Target::Sub ? "substitution" : "edit";
    ch["rate"] = 0.0;
    c.channel = config::parse_channel(ch.dump());
    c.rates = j.at("rates").get<std::vector<double>>();
    c.alphas = j.value("alphas", std::vector<double>{0.0});
    c.ns = j.value("ns", std::vector<std::uint64_t>{c.code.inner.n});
    for (double r : c.rates) {
      if (!(r >= 0.0 && r <= 1.0)) throw Error(E, "rates must lie in [0,1]");
    }
    if (c.trials == 0 || c.rates.empty() || c.alphas.empty() || c.ns.empty()) {
      throw Error(E, "trials, rates, alphas and ns must be non-empty");
    }
  } catch (const json::exception& e) {
    throw Error(E, e.what());
  } catch (const Error& e) {
    if (e.code() == E) throw;
    throw Error(E, e.what());
  }
  c.canonical = j.dump();
  return c;
}

namespace {

struct Trial {
  bool detected = false;
  double stat = 0.0;  // W / m
};

struct Runner {
  const ExperimentConfig& cfg;
  config::CodeSpec code;
  std::unique_ptr<lm::LanguageModel> model;

  Seed key_seed(const Seed& group, std::uint64_t t) const { return group.derive("key").derive(t); }

  wm::WatermarkParams wm_params(double alpha) const {
    wm::WatermarkParams p;
    p.n = wm::block_length(code.code_params());
    p.alpha = alpha;
    p.sigma_size = model->alphabet().size();
    p.L_max = cfg.L_max;
    if (p.L_max == 0) {
      const auto* fixed = dynamic_cast<const lm::FixedLengthUniformModel*>(model.get());
      p.L_max = fixed ? fixed->length() + 1 : 4 * p.n;
    }
    return p;
  }

  // Runs one encode -> channel -> decode trial, or the null-hypothesis
  // counterpart when `null` is set.
  Trial run(const Seed& group, std::uint64_t t, double alpha, double rate, bool null) const {
    const Seed ks = key_seed(group, null ? t + (1ull << 40) : t);
    Rng rng(ks.derive(null ? "null" : "enc"));
    channel::ChannelSpec ch = cfg.channel;
    ch.rate = rate;
    ch.seed = ks.derive("channel").derive(static_cast<std::uint64_t>(rate * 1e9));
    Trial out;
    switch (cfg.target) {
      case Target::Sub: {
        const auto key = sub::keygen(code.inner, code.family, ks);
        BitString y;
        if (null) {
          std::vector<Symbol> v(code.inner.N);
          for (auto& b : v) b = static_cast<Symbol>(rng.below(2));
          y = BitString::trusted(Alphabet::binary(), std::move(v));
        } else {
          y = channel::apply_channel(ch, sub::encode(key, code.inner, rng));
        }
        const auto d = sub::decode(key, code.inner, y);
        out.detected = d.accepted;
        out.stat = static_cast<double>(d.statistic) / static_cast<double>(code.inner.m);
        break;
      }
      case Target::Idx: {
        const auto params = idx::IdxParams::make(code.inner, code.rho);
        const auto key = idx::keygen_idx(params, code.family, ks);
        SymbolString z;
        if (null) {
          std::vector<Symbol> v(params.m_out);
          for (auto& s : v) s = static_cast<Symbol>(rng.below(params.q_out));
          z = SymbolString::trusted(Alphabet(params.q_out), std::move(v));
        } else {
          z = channel::apply_channel(ch, idx::encode_idx(key, params, rng));
        }
        const auto d = idx::decode_idx(key, params, z);
        out.detected = d.accepted;
        out.stat = static_cast<double>(d.statistic) / static_cast<double>(code.inner.m);
        break;
      }
      case Target::Wm: {
        const auto params = wm_params(alpha);
        const auto key = wm::setup(params, code.code_params(), code.family, ks);
        SymbolString tok;
        if (null) {
          tok = lm::sample_sequence(*model, rng, params.L_max);
        } else {
          tok = channel::apply_channel(ch, wm::wat(key, params, *model, ks.derive("wat")));
        }
        const auto d = wm::detect(key, params, tok);
        out.detected = d.detected;
        out.stat = static_cast<double>(d.statistic) / static_cast<double>(d.samples);
        break;
      }
    }
    return out;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string run_experiment(const ExperimentConfig& cfg, bool timing) {
  std::string csv(kCsvHeader);
  csv += '\n';
  const Seed master(cfg.seed, "experiment");
  for (std::uint64_t n : cfg.ns) {
    Runner runner{cfg, cfg.code.with_input_length(n), nullptr};
    if (cfg.target == Target::Wm) runner.model = config::parse_model(cfg.model_json);
    const Seed group = master.derive("n").derive(n);
    for (double alpha : cfg.alphas) {
      std::uint64_t fp = 0;
      for (std::uint64_t t = 0; t < cfg.fp_trials; ++t) fp += runner.run(group, t, alpha, 0.0, true).detected;
      const double fp_rate = cfg.fp_trials ? static_cast<double>(fp) / static_cast<double>(cfg.fp_trials) : 0.0;
      for (double rate : cfg.rates) {
        const auto start = std::chrono::steady_clock::now();
        std::uint64_t hits = 0;
        double stat_sum = 0.0;
        for (std::uint64_t t = 0; t < cfg.trials; ++t) {
          const auto r = runner.run(group, t, alpha, rate, false);
          hits += r.detected;
          stat_sum += r.stat;
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        const double trials = static_cast<double>(cfg.trials);
        csv += fmt(rate) + "," + fmt(alpha) + "," + std::to_string(n) + "," + std::to_string(cfg.trials) + "," +
               fmt(static_cast<double>(hits) / trials) + "," + fmt(fp_rate) + "," + fmt(stat_sum / trials) + "," +
               (timing ? fmt(std::round(ms)) : std::string("0")) + "\n";
      }
    }
  }
  char trailer[64];
  std::snprintf(trailer, sizeof trailer, "# config-hash: %016" PRIx64 "\n", fnv1a64(cfg.canonical));
  return csv + trailer;
}

}  // namespace prc::experiment
