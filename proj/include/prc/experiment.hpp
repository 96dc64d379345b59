#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "prc/channels.hpp"
#include "prc/config.hpp"
#include "prc/lm.hpp"

namespace prc::experiment {

enum class Target : std::uint8_t { Sub, Idx, Wm };

/// A robustness sweep over a grid of (n, alpha, rate).
struct ExperimentConfig {
  Target target = Target::Idx;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t fp_trials = 0;
  config::CodeSpec code;
  std::string model_json;  ///< wm target only
  std::uint64_t L_max = 0;  ///< wm target; 0 means the model length plus one
  channel::ChannelSpec channel;  ///< rate and seed are set per row and trial
  std::vector<double> rates;
  std::vector<double> alphas;
  std::vector<std::uint64_t> ns;
  std::string canonical;  ///< normalized JSON, hashed into the trailer line
};

/// Fields: target (sub|idx|wm), seed, trials, fp_trials, code (keygen-style
/// object without kind), model (wm), L_max (wm), channel, rates, alphas, ns.
/// Throws ConfigParse.
ExperimentConfig parse_experiment(std::string_view json_text);

inline constexpr std::string_view kCsvHeader = "rate,alpha,n,trials,detect_rate,fp_rate,mean_stat,wall_ms";

/// CSV with the fixed header, one row per grid point (n, then alpha, then
/// rate), and a trailing `# config-hash: <hex>` line. wall_ms is 0 unless
/// `timing` is set, so the default output depends only on the config.
std::string run_experiment(const ExperimentConfig& cfg, bool timing = false);

}  // namespace prc::experiment
