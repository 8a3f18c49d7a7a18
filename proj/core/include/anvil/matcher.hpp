#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anvil/rules.hpp"
#include "anvil/text_analysis.hpp"

namespace anvil {

// Word similarity used by the comparison rules. Equal lemmas score 1.0;
// otherwise the symmetric synonym table is consulted; anything else does
// not match.
class SimilarityProvider {
 public:
  SimilarityProvider() = default;

  // Throws std::invalid_argument for values outside (0, 1].
  void add_synonym(std::string_view a, std::string_view b, double similarity);

  // TSV: lemma, lemma, similarity. '#' comments.
  static SimilarityProvider parse(std::string_view tsv);

  std::optional<double> similarity(const Token& query, const Token& caption) const;
  std::optional<double> similarity(std::string_view a, std::string_view b) const;
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, double> table_;
};

// One scored comparison. Rows from token rules carry weight 0 and exist for
// tracing; rows with no caption position come from mopping-up rules or
// from query words no rule caught.
struct WordMatch {
  // Query surface, or "(none)" for token-rule rows.
  std::string query_word;
  std::optional<std::size_t> query_pos;
  std::optional<std::size_t> caption_pos;
  double score = 0.0;
  double weight = 0.0;
  // Score before up-scores from the continuation were applied.
  double initial_score = 0.0;
  double up_score = 1.0;
  std::string group;       // empty for unmatched query words
  std::string comparison;  // rule comparison text, "(unmatched)" otherwise
  std::size_t rule_index = 0;

  bool unmatched() const noexcept { return group.empty(); }
  bool operator==(const WordMatch&) const = default;
};

struct TraceEvent {
  enum class Kind { kAssign, kUpScore };
  Kind kind = Kind::kAssign;
  std::size_t row = 0;

  bool operator==(const TraceEvent&) const = default;
};

struct MatchResult {
  std::vector<WordMatch> rows;
  std::vector<TraceEvent> events;
  double overall = 0.0;
  // Caption positions consumed by any rule, ascending.
  std::vector<std::size_t> matched_caption;

  bool operator==(const MatchResult&) const = default;
};

struct MatchOptions {
  // Weight given to query content words no rule consumed (their score is 0).
  double unmatched_weight = 1.0;
};

// Recursive structural comparison of a query and a caption under a rule set.
//
// Rules of a group run in file order. A comparison rule consumes the best
// unconsumed (query, caption) pair it can find (highest similarity, then
// lowest positions), scores the query word t * similarity at the current
// weight and recurses into its continuation with that pair as anchors and
// the weight multiplied by d. A mopping-up rule consumes query words only.
// A token rule consumes the word on its structural side and passes its d
// factor up: when a continuation returns, the product of the up-scores
// raised in it multiplies the score of the rule that invoked it.
//
// overall = sum(score * weight) / sum(weight) over rows with a query word.
MatchResult match_phrases(const ParseOutput& query, const ParseOutput& caption,
                          const RuleSet& rules, const SimilarityProvider& similarity = {},
                          const MatchOptions& options = {});

// Trace table in the order rules fired:
//
//   Query word  Rule group  Comparison     Score  Weight
//   car         head_rule   head = head    1.0    1.0
//   yellow      mod_rule    mod[] = mod[]  1.0    0.7
//   overall = 1
std::string render_trace(const MatchResult& result);

// Score formatting shared by the trace and the CLI: at least one decimal,
// at most three ("1.0", "0.588").
std::string format_score(double value);
// Overall-score formatting: at most three decimals, trailing zeros
// dropped ("1", "0.588", "0").
std::string format_overall(double value);

}  // namespace anvil
