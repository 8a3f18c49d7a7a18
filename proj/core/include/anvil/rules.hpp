#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anvil/dependency.hpp"
#include "anvil/text_analysis.hpp"
#include "anvil/token.hpp"

namespace anvil {

// One side of a comparison in a match rule.
struct RuleSide {
  enum class Kind { kHead, kPath, kToken, kWildcard };

  Kind kind = Kind::kHead;
  Path path;          // kPath only
  std::string token;  // kToken only: lowercase literal

  static RuleSide head() { return {Kind::kHead, {}, {}}; }
  static RuleSide of_path(Path p) { return {Kind::kPath, std::move(p), {}}; }
  static RuleSide of_token(std::string word) { return {Kind::kToken, {}, std::move(word)}; }
  static RuleSide wildcard() { return {Kind::kWildcard, {}, {}}; }

  // head, mod[], vhead:cop:rel[], 'not' or ?
  std::string str() const;

  bool operator==(const RuleSide&) const = default;
};

// lhs = rhs t => continuation d;   or   lhs ? t => continuation d;
// The left side is evaluated on the query, the right side on the caption.
struct MatchRule {
  RuleSide lhs;
  RuleSide rhs;
  double t_factor = 1.0;
  // Group name, or empty for Done.
  std::string continuation;
  double d_factor = 1.0;
  std::size_t line = 0;

  bool is_done() const noexcept { return continuation.empty(); }
  bool is_mopping_up() const noexcept { return rhs.kind == RuleSide::Kind::kWildcard; }
  bool is_token_rule() const noexcept {
    return lhs.kind == RuleSide::Kind::kToken || rhs.kind == RuleSide::Kind::kToken;
  }

  // The comparison as written, e.g. "mod[] = vhead:cop:rel[]" or "mod[] ?".
  std::string comparison() const;
  std::string str() const;

  // Source line is not part of a rule's identity.
  bool operator==(const MatchRule& other) const {
    return lhs == other.lhs && rhs == other.rhs && t_factor == other.t_factor &&
           continuation == other.continuation && d_factor == other.d_factor;
  }
};

struct RuleGroup {
  std::string name;
  std::vector<MatchRule> rules;

  bool operator==(const RuleGroup&) const = default;
};

// Named rule groups in file order. The first group is the start group.
class RuleSet {
 public:
  RuleSet() = default;
  // Validates: at least one group, no empty or duplicate groups, every
  // continuation resolves. Throws Error(kRuleSetInvalid) otherwise.
  explicit RuleSet(std::vector<RuleGroup> groups);

  const std::vector<RuleGroup>& groups() const noexcept { return groups_; }
  const RuleGroup& start_group() const { return groups_.front(); }
  const std::string& start_name() const { return groups_.front().name; }
  // Index of the named group, or nullopt.
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t rule_count() const;

  bool operator==(const RuleSet&) const = default;

 private:
  std::vector<RuleGroup> groups_;
};

// Reads the match-rule language:
//
//   head_rule
//   {
//    head = head  1.0 => mod_rule 0.7;
//    mod[]  ?     0.3 => Done 1.0;
//   }
//
// Whitespace (including newlines) is free between lexemes and '//' starts a
// line comment. Errors: SyntaxError, UnknownVariable, UnknownContinuation,
// FactorOutOfRange, UnsupportedRuleVariant, all carrying line and column.
RuleSet parse_rules(std::string_view text);

// Canonical text; parse_rules(render_rules(r)) == r.
std::string render_rules(const RuleSet& rules);

// <rt, rv, rp, ru, rC>: a matched word with tag rt stored in variable rv
// reaches an unmatched word with tag ru along rp; the smallest phrase of
// category rC around that word is the context. Empty optionals are '*'.
struct ContextRule {
  std::vector<PartOfSpeech> matched_pos;  // empty = any
  std::optional<Var> matched_var;
  bool matched_is_head = false;
  Path path;
  std::vector<PartOfSpeech> context_pos;  // empty = any
  std::optional<PhraseCategory> category;
  std::size_t line = 0;

  std::string str() const;

  bool operator==(const ContextRule& other) const {
    return matched_pos == other.matched_pos && matched_var == other.matched_var &&
           matched_is_head == other.matched_is_head && path == other.path &&
           context_pos == other.context_pos && category == other.category;
  }
};

// One rule per non-blank line, five whitespace-separated fields; '*' is a
// wildcard, tag fields accept alternatives such as noun|adj, and '#' or
// '//' start a comment. Errors: BadFieldCount, SyntaxError,
// UnknownVariable (all with the line number).
std::vector<ContextRule> parse_context_rules(std::string_view text);

std::string render_context_rules(const std::vector<ContextRule>& rules);

// Reads a whole file into memory; Error(kIoError) on failure.
std::string read_file(const std::string& path);

}  // namespace anvil
