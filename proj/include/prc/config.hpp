#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "prc/channels.hpp"
#include "prc/keyfile.hpp"
#include "prc/lm.hpp"
#include "prc/watermark.hpp"

// JSON front ends for parameter, model and channel files.
namespace prc::config {

/// A binary code, optionally wrapped in the indexing code (rho > 0).
struct CodeSpec {
  sub::SubParams inner;
  std::uint32_t rho = 0;
  prf::LocalPrfFamily family;

  wm::CodeParams code_params() const;
  /// The same spec with PRF input length n, recomputing m (theory) or a
  /// shape-derived N (demo).
  CodeSpec with_input_length(std::uint64_t n) const;

  enum class Block : std::uint8_t { Full, Payload, Explicit };
  Block block = Block::Full;
  double c0 = 1.0;
};

struct KeygenSpec {
  keyfile::KeyKind kind = keyfile::KeyKind::Sub;
  CodeSpec code;
  wm::WatermarkParams wm;  ///< kind wm only; n is the code block length
};

/// Fields: kind (sub|idx|wm), profile (demo|theory), n, m, N (number, "full"
/// for 3m(n+1)^2 or "payload" for (n+1)m), p, q, c0, family, tau, rho, and
/// for wm: code (sub|idx), alpha, sigma_size, L_max. Throws ParamParse.
KeygenSpec parse_keygen(std::string_view json_text);

/// Fields: kind (uniform-subset|markov|fixed-length-uniform), alphabet,
/// terminal (default alphabet-1), subset, initial, transitions, length.
/// Throws SpecParse.
std::unique_ptr<lm::LanguageModel> parse_model(std::string_view json_text);

/// Fields: kind, rate, strategy, seed, script (text or list of lines),
/// psi_guess, op_weights. Throws SpecParse.
channel::ChannelSpec parse_channel(std::string_view json_text);

/// Reads a whole file; throws Io.
std::string read_file(const std::string& path);

}  // namespace prc::config
