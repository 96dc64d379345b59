#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prc/core.hpp"

namespace prc::channel {

enum class Kind : std::uint8_t { Substitution, Edit };

enum class Strategy : std::uint8_t { IidRandom, Burst, GreedyTargeted, Duplication, CustomScript };

std::string_view kind_name(Kind k) noexcept;
std::string_view strategy_name(Strategy s) noexcept;
Kind parse_kind(std::string_view s);
Strategy parse_strategy(std::string_view s);

struct EditOp {
  enum class Type : std::uint8_t { Substitute, Insert, Delete };
  Type type = Type::Substitute;
  std::uint64_t position = 0;
  Symbol symbol = 0;  ///< unused for Delete

  bool operator==(const EditOp&) const = default;
};

/// A hard-budgeted channel: at most floor(rate * len(x)) operations.
struct ChannelSpec {
  Kind kind = Kind::Substitution;
  double rate = 0.0;
  Strategy strategy = Strategy::IidRandom;
  Seed seed;
  std::vector<EditOp> script;     ///< custom-script only
  std::vector<Symbol> psi_guess;  ///< greedy-targeted; empty means symbols are their own class
  /// Relative weights of substitution, insertion, deletion for iid-random edits.
  std::array<double, 3> op_weights{1.0, 1.0, 1.0};

  /// Throws InvalidRate or InvalidStrategyForKind.
  void validate() const;
  std::uint64_t budget(std::size_t length) const;
};

/// Throws BudgetExceeded if a custom script needs more operations than the budget.
SymbolString apply_channel(const ChannelSpec& spec, const SymbolString& x);

/// Whether y is within the spec's budget of x (Hamming distance for the
/// substitution kind, edit distance for the edit kind).
bool verify_budget(const ChannelSpec& spec, const SymbolString& x, const SymbolString& y);

/// Line format: `S <pos> <sym>`, `I <pos> <sym>`, `D <pos>`. Blank lines and
/// lines starting with '#' are skipped.
std::vector<EditOp> parse_edit_script(std::string_view text);
std::string format_edit_script(const std::vector<EditOp>& ops);

/// Applies ops left to right against the evolving string.
SymbolString apply_edit_script(const SymbolString& x, const std::vector<EditOp>& ops);

}  // namespace prc::channel
