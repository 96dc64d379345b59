#include "prc/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace prc::channel {

std::string_view kind_name(Kind k) noexcept {
  return k == Kind::Substitution ? "substitution" : "edit";
}

std::string_view strategy_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::IidRandom: return "iid-random";
    case Strategy::Burst: return "burst";
    case Strategy::GreedyTargeted: return "greedy-targeted";
    case Strategy::Duplication: return "duplication";
    case Strategy::CustomScript: return "custom-script";
  }
  return "?";
}

Kind parse_kind(std::string_view s) {
  if (s == "substitution") return Kind::Substitution;
  if (s == "edit") return Kind::Edit;
  throw Error(Errc::SpecParse, "unknown channel kind '" + std::string(s) + "'");
}

Strategy parse_strategy(std::string_view s) {
  for (auto st : {Strategy::IidRandom, Strategy::Burst, Strategy::GreedyTargeted,
                  Strategy::Duplication, Strategy::CustomScript}) {
    if (strategy_name(st) == s) return st;
  }
  throw Error(Errc::SpecParse, "unknown channel strategy '" + std::string(s) + "'");
}

void ChannelSpec::validate() const {
  if (!(rate >= 0.0 && rate <= 1.0)) throw Error(Errc::InvalidRate, "channel rate must lie in [0,1]");
  if (kind == Kind::Substitution &&
      (strategy == Strategy::GreedyTargeted || strategy == Strategy::Duplication)) {
    throw Error(Errc::InvalidStrategyForKind,
                std::string(strategy_name(strategy)) + " changes length; needs the edit kind");
  }
  if (kind == Kind::Substitution && strategy == Strategy::CustomScript) {
    for (const auto& op : script) {
      if (op.type != EditOp::Type::Substitute) {
        throw Error(Errc::InvalidStrategyForKind, "substitution scripts may only contain S ops");
      }
    }
  }
  for (double w : op_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidArgument, "op weights must be non-negative");
  }
  if (op_weights[0] + op_weights[1] + op_weights[2] <= 0.0) {
    throw Error(Errc::InvalidArgument, "op weights must not all be zero");
  }
}

std::uint64_t ChannelSpec::budget(std::size_t length) const {
  return static_cast<std::uint64_t>(std::floor(rate * static_cast<double>(length) + 1e-9));
}

namespace {

Symbol different_symbol(Symbol s, std::uint64_t q, Rng& rng) {
  const auto r = static_cast<Symbol>(rng.below(q - 1));
  return r >= s ? r + 1 : r;
}

SymbolString iid_substitution(const SymbolString& x, std::uint64_t budget, Rng& rng) {
  const std::uint64_t q = x.alphabet().size();
  if (q < 2) return x;
  std::vector<Symbol> out = x.vector();
  for (auto pos : sample_distinct(out.size(), std::min<std::size_t>(budget, out.size()), rng)) {
    out[pos] = different_symbol(out[pos], q, rng);
  }
  return SymbolString::trusted(x.alphabet(), std::move(out));
}

SymbolString burst_substitution(const SymbolString& x, std::uint64_t budget, Rng& rng) {
  const std::uint64_t q = x.alphabet().size();
  const std::size_t len = std::min<std::size_t>(budget, x.size());
  if (q < 2 || len == 0) return x;
  const std::size_t start = rng.below(x.size() - len + 1);
  std::vector<Symbol> out = x.vector();
  for (std::size_t i = start; i < start + len; ++i) out[i] = different_symbol(out[i], q, rng);
  return SymbolString::trusted(x.alphabet(), std::move(out));
}

SymbolString burst_edit(const SymbolString& x, std::uint64_t budget, Rng& rng) {
  const std::size_t len = std::min<std::size_t>(budget, x.size());
  if (len == 0) return x;
  const std::uint64_t q = x.alphabet().size();
  const std::size_t start = rng.below(x.size() - len + 1);
  std::vector<Symbol> out = x.vector();
  for (std::size_t i = start; i < start + len; ++i) out[i] = static_cast<Symbol>(rng.below(q));
  return SymbolString::trusted(x.alphabet(), std::move(out));
}

SymbolString iid_edit(const SymbolString& x, std::uint64_t budget, const std::array<double, 3>& w,
                      Rng& rng) {
  const std::uint64_t q = x.alphabet().size();
  std::vector<std::uint8_t> op(x.size(), 0);  // 0 keep, 1 S, 2 I, 3 D
  const double total = w[0] + w[1] + w[2];
  for (auto pos : sample_distinct(x.size(), std::min<std::size_t>(budget, x.size()), rng)) {
    const double u = rng.uniform01() * total;
    op[pos] = u < w[0] ? 1 : (u < w[0] + w[1] ? 2 : 3);
  }
  std::vector<Symbol> out;
  out.reserve(x.size() + budget);
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (op[i]) {
      case 0: out.push_back(x[i]); break;
      case 1: out.push_back(static_cast<Symbol>(rng.below(q))); break;
      case 2:
        out.push_back(static_cast<Symbol>(rng.below(q)));
        out.push_back(x[i]);
        break;
      default: break;
    }
  }
  return SymbolString::trusted(x.alphabet(), std::move(out));
}

SymbolString duplication(const SymbolString& x, std::uint64_t budget, Rng& rng) {
  std::vector<std::uint8_t> dup(x.size(), 0);
  for (auto pos : sample_distinct(x.size(), std::min<std::size_t>(budget, x.size()), rng)) dup[pos] = 1;
  std::vector<Symbol> out;
  out.reserve(x.size() + budget);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.push_back(x[i]);
    if (dup[i]) out.push_back(x[i]);
  }
  return SymbolString::trusted(x.alphabet(), std::move(out));
}

// Deletes every occurrence of whole classes, rarest first, so each deletion
// spent removes as many distinct classes as the budget allows.
SymbolString greedy_targeted(const SymbolString& x, std::uint64_t budget,
                             const std::vector<Symbol>& psi_guess, Rng& rng) {
  auto cls = [&](Symbol s) -> std::uint64_t {
    if (psi_guess.empty()) return s;
    if (s >= psi_guess.size()) throw Error(Errc::SymbolOutOfRange, "symbol outside the psi guess");
    return psi_guess[s];
  };
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (Symbol s : x) ++counts[cls(s)];
  std::vector<std::pair<std::uint64_t, std::uint64_t>> order(counts.begin(), counts.end());
  std::sort(order.begin(), order.end());
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  std::unordered_map<std::uint64_t, bool> removed;
  std::uint64_t left = budget;
  for (const auto& [c, count] : order) {
    if (count > left) break;
    removed[c] = true;
    left -= count;
  }
  std::vector<Symbol> out;
  out.reserve(x.size());
  for (Symbol s : x) {
    if (!removed.count(cls(s))) out.push_back(s);
  }
  return SymbolString::trusted(x.alphabet(), std::move(out));
}

}  // namespace

SymbolString apply_edit_script(const SymbolString& x, const std::vector<EditOp>& ops) {
  std::vector<Symbol> out = x.vector();
  for (const auto& op : ops) {
    const bool needs_symbol = op.type != EditOp::Type::Delete;
    if (needs_symbol && !x.alphabet().contains(op.symbol)) {
      throw Error(Errc::SymbolOutOfRange, "script symbol " + std::to_string(op.symbol) + " outside alphabet");
    }
    const std::uint64_t limit = op.type == EditOp::Type::Insert ? out.size() : out.size() - 1;
    if (out.empty() && op.type != EditOp::Type::Insert) {
      throw Error(Errc::InvalidArgument, "script edits an empty string");
    }
    if (op.position > limit) {
      throw Error(Errc::InvalidArgument, "script position " + std::to_string(op.position) + " out of range");
    }
    const auto it = out.begin() + static_cast<std::ptrdiff_t>(op.position);
    switch (op.type) {
      case EditOp::Type::Substitute: *it = op.symbol; break;
      case EditOp::Type::Insert: out.insert(it, op.symbol); break;
      case EditOp::Type::Delete: out.erase(it); break;
    }
  }
  return SymbolString::trusted(x.alphabet(), std::move(out));
}

SymbolString apply_channel(const ChannelSpec& spec, const SymbolString& x) {
  spec.validate();
  const std::uint64_t budget = spec.budget(x.size());
  Rng rng(spec.seed);
  const bool sub = spec.kind == Kind::Substitution;
  switch (spec.strategy) {
    case Strategy::CustomScript:
      if (spec.script.size() > budget) {
        throw Error(Errc::BudgetExceeded, "script has " + std::to_string(spec.script.size()) +
                                              " ops, budget is " + std::to_string(budget));
      }
      return apply_edit_script(x, spec.script);
    case Strategy::IidRandom:
      return sub ? iid_substitution(x, budget, rng) : iid_edit(x, budget, spec.op_weights, rng);
    case Strategy::Burst:
      return sub ? burst_substitution(x, budget, rng) : burst_edit(x, budget, rng);
    case Strategy::GreedyTargeted: return greedy_targeted(x, budget, spec.psi_guess, rng);
    case Strategy::Duplication: return duplication(x, budget, rng);
  }
  return x;
}

bool verify_budget(const ChannelSpec& spec, const SymbolString& x, const SymbolString& y) {
  const std::uint64_t budget = spec.budget(x.size());
  if (spec.kind == Kind::Substitution) {
    return x.size() == y.size() && hamming_distance(x, y) <= budget;
  }
  return edit_distance_capped(x, y, budget) <= budget;
}

std::vector<EditOp> parse_edit_script(std::string_view text) {
  std::vector<EditOp> ops;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    EditOp op;
    auto fail = [&] {
      return Error(Errc::SpecParse, "bad edit script line " + std::to_string(lineno) + ": '" + line + "'");
    };
    if (tag == "S") op.type = EditOp::Type::Substitute;
    else if (tag == "I") op.type = EditOp::Type::Insert;
    else if (tag == "D") op.type = EditOp::Type::Delete;
    else throw fail();
    long long pos = -1;
    if (!(ls >> pos) || pos < 0) throw fail();
    op.position = static_cast<std::uint64_t>(pos);
    if (op.type != EditOp::Type::Delete) {
      long long sym = -1;
      if (!(ls >> sym) || sym < 0 || sym > 0xffffffffLL) throw fail();
      op.symbol = static_cast<Symbol>(sym);
    }
    std::string extra;
    if (ls >> extra) throw fail();
    ops.push_back(op);
  }
  return ops;
}

std::string format_edit_script(const std::vector<EditOp>& ops) {
  std::string out;
  for (const auto& op : ops) {
    switch (op.type) {
      case EditOp::Type::Substitute: out += "S " + std::to_string(op.position) + " " + std::to_string(op.symbol); break;
      case EditOp::Type::Insert: out += "I " + std::to_string(op.position) + " " + std::to_string(op.symbol); break;
      case EditOp::Type::Delete: out += "D " + std::to_string(op.position); break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace prc::channel
