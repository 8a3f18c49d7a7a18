#include "anvil/matcher.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "anvil/error.hpp"

namespace anvil {

// ---------------------------------------------------------------------------
// Similarity

void SimilarityProvider::add_synonym(std::string_view a, std::string_view b,
                                     double similarity) {
  if (!(similarity > 0.0 && similarity <= 1.0)) {
    throw std::invalid_argument("similarity must lie in (0, 1]");
  }
  std::string x = to_lower(a);
  std::string y = to_lower(b);
  if (y < x) std::swap(x, y);
  table_[{std::move(x), std::move(y)}] = similarity;
}

SimilarityProvider SimilarityProvider::parse(std::string_view tsv) {
  SimilarityProvider out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < tsv.size()) {
    auto eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = tsv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw Error(ErrorCode::kSyntaxError,
                  "synonym line " + std::to_string(line_no) + ": expected 3 columns");
    }
    const auto value_text = line.substr(t2 + 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(),
                                     value);
    if (ec != std::errc()) {
      throw Error(ErrorCode::kSyntaxError,
                  "synonym line " + std::to_string(line_no) + ": bad similarity");
    }
    out.add_synonym(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), value);
  }
  return out;
}

std::optional<double> SimilarityProvider::similarity(std::string_view a,
                                                     std::string_view b) const {
  if (a == b) return 1.0;
  std::string x(a);
  std::string y(b);
  if (y < x) std::swap(x, y);
  auto it = table_.find({x, y});
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> SimilarityProvider::similarity(const Token& query,
                                                     const Token& caption) const {
  return similarity(query.lemma, caption.lemma);
}

// ---------------------------------------------------------------------------
// Matching

namespace {

using Positions = std::vector<std::size_t>;

class Matcher {
 public:
  Matcher(const ParseOutput& query, const ParseOutput& caption, const RuleSet& rules,
          const SimilarityProvider& similarity, const MatchOptions& options)
      : query_(query),
        caption_(caption),
        rules_(rules),
        similarity_(similarity),
        options_(options),
        query_used_(query.tokens.size(), false),
        caption_used_(caption.tokens.size(), false) {}

  MatchResult run() {
    apply_group(0, std::nullopt, std::nullopt, 1.0, true);
    for (const auto& t : query_.tokens) {
      if (!is_content(t.pos) || query_used_[t.position]) continue;
      WordMatch row;
      row.query_word = t.surface;
      row.query_pos = t.position;
      row.weight = options_.unmatched_weight;
      row.comparison = "(unmatched)";
      push_row(std::move(row));
    }
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto& row : result_.rows) {
      if (!row.query_pos) continue;
      numerator += row.score * row.weight;
      denominator += row.weight;
    }
    result_.overall = denominator > 0.0 ? numerator / denominator : 0.0;
    for (std::size_t i = 0; i < caption_used_.size(); ++i) {
      if (caption_used_[i]) result_.matched_caption.push_back(i);
    }
    return std::move(result_);
  }

 private:
  // Runs one group invocation and returns the product of the up-scores it
  // raised for the rule that invoked it.
  double apply_group(std::size_t group_index, std::optional<std::size_t> query_anchor,
                     std::optional<std::size_t> caption_anchor, double weight, bool start) {
    const RuleGroup& group = rules_.groups()[group_index];
    double up = 1.0;
    for (std::size_t r = 0; r < group.rules.size(); ++r) {
      const MatchRule& rule = group.rules[r];
      if (rule.is_mopping_up()) {
        up *= mop_up(group, r, query_anchor, weight, start);
      } else if (rule.lhs.kind == RuleSide::Kind::kToken) {
        up *= token_rule(group, r, caption_, caption_used_, rule.rhs, caption_anchor, weight,
                         start, /*query_side=*/false);
      } else if (rule.rhs.kind == RuleSide::Kind::kToken) {
        up *= token_rule(group, r, query_, query_used_, rule.lhs, query_anchor, weight, start,
                         /*query_side=*/true);
      } else {
        up *= compare(group, r, query_anchor, caption_anchor, weight, start);
      }
    }
    return up;
  }

  Positions candidates(const ParseOutput& parse, const std::vector<bool>& used,
                       const RuleSide& side, std::optional<std::size_t> anchor,
                       bool start) const {
    Positions raw;
    switch (side.kind) {
      case RuleSide::Kind::kHead:
        raw = parse.structure.heads();
        break;
      case RuleSide::Kind::kPath:
        if (anchor) {
          raw = resolve_path(parse.structure, side.path, *anchor);
        } else if (start) {
          raw = path_extent(parse.structure, side.path);
        }
        break;
      default:
        break;
    }
    Positions out;
    for (std::size_t p : raw) {
      if (!used[p] && parse.tokens[p].pos != PartOfSpeech::kPunct) out.push_back(p);
    }
    return out;
  }

  // Runs the continuation of a rule that just fired and returns the factor
  // to apply to the row it produced (or to pass upward).
  double continue_with(const MatchRule& rule, std::optional<std::size_t> q,
                       std::optional<std::size_t> c, double weight) {
    if (rule.is_done()) return rule.d_factor;
    const auto target = rules_.find(rule.continuation);
    if (!target) throw Error(ErrorCode::kRuleSetInvalid, "unknown group " + rule.continuation);
    return apply_group(*target, q, c, weight * rule.d_factor, false);
  }

  // The invoking rule's score absorbs the continuation's up-scores; a start
  // group has no invoker so its Done factors go nowhere.
  void settle(std::size_t row_index, double factor) {
    if (factor == 1.0) return;
    auto& row = result_.rows[row_index];
    row.up_score *= factor;
    row.score = row.initial_score * row.up_score;
    result_.events.push_back({TraceEvent::Kind::kUpScore, row_index});
  }

  double compare(const RuleGroup& group, std::size_t r, std::optional<std::size_t> query_anchor,
                 std::optional<std::size_t> caption_anchor, double weight, bool start) {
    const MatchRule& rule = group.rules[r];
    double up = 1.0;
    while (true) {
      const Positions qs = candidates(query_, query_used_, rule.lhs, query_anchor, start);
      const Positions cs = candidates(caption_, caption_used_, rule.rhs, caption_anchor, start);
      std::optional<std::pair<std::size_t, std::size_t>> best;
      double best_sim = 0.0;
      for (std::size_t q : qs) {
        for (std::size_t c : cs) {
          const auto sim = similarity_.similarity(query_.tokens[q], caption_.tokens[c]);
          if (sim && *sim > best_sim) {
            best_sim = *sim;
            best = {q, c};
          }
        }
      }
      if (!best) break;
      const auto [q, c] = *best;
      query_used_[q] = true;
      caption_used_[c] = true;
      WordMatch row;
      row.query_word = query_.tokens[q].surface;
      row.query_pos = q;
      row.caption_pos = c;
      row.initial_score = rule.t_factor * best_sim;
      row.score = row.initial_score;
      row.weight = weight;
      row.group = group.name;
      row.comparison = rule.comparison();
      row.rule_index = r;
      const std::size_t index = push_row(std::move(row));
      const double factor = continue_with(rule, q, c, weight);
      if (start) continue;
      if (rule.is_done()) {
        up *= factor;
      } else {
        settle(index, factor);
      }
    }
    return up;
  }

  double mop_up(const RuleGroup& group, std::size_t r, std::optional<std::size_t> query_anchor,
                double weight, bool start) {
    const MatchRule& rule = group.rules[r];
    double up = 1.0;
    for (std::size_t q : candidates(query_, query_used_, rule.lhs, query_anchor, start)) {
      if (query_used_[q]) continue;
      query_used_[q] = true;
      WordMatch row;
      row.query_word = query_.tokens[q].surface;
      row.query_pos = q;
      row.initial_score = rule.t_factor;
      row.score = row.initial_score;
      row.weight = weight;
      row.group = group.name;
      row.comparison = rule.comparison();
      row.rule_index = r;
      const std::size_t index = push_row(std::move(row));
      const double factor = continue_with(rule, q, std::nullopt, weight);
      if (start) continue;
      if (rule.is_done()) {
        up *= factor;
      } else {
        settle(index, factor);
      }
    }
    return up;
  }

  // A literal tested against the word(s) the other side's path reaches.
  double token_rule(const RuleGroup& group, std::size_t r, const ParseOutput& parse,
                    std::vector<bool>& used, const RuleSide& side,
                    std::optional<std::size_t> anchor, double weight, bool start,
                    bool query_side) {
    const MatchRule& rule = group.rules[r];
    const std::string& literal = query_side ? rule.rhs.token : rule.lhs.token;
    double up = 1.0;
    for (std::size_t p : candidates(parse, used, side, anchor, start)) {
      const Token& t = parse.tokens[p];
      if (used[p] || (t.lemma != literal && to_lower(t.surface) != literal)) continue;
      used[p] = true;
      WordMatch row;
      row.query_word = query_side ? t.surface : "(none)";
      if (query_side) {
        row.query_pos = p;
      } else {
        row.caption_pos = p;
      }
      row.initial_score = rule.t_factor;
      row.score = row.initial_score;
      row.weight = 0.0;
      row.group = group.name;
      row.comparison = rule.comparison();
      row.rule_index = r;
      push_row(std::move(row));
      const double factor =
          continue_with(rule, query_side ? std::optional(p) : std::nullopt,
                        query_side ? std::nullopt : std::optional(p), weight);
      if (!start) up *= factor;
    }
    return up;
  }

  std::size_t push_row(WordMatch row) {
    result_.rows.push_back(std::move(row));
    const std::size_t index = result_.rows.size() - 1;
    result_.events.push_back({TraceEvent::Kind::kAssign, index});
    return index;
  }

  const ParseOutput& query_;
  const ParseOutput& caption_;
  const RuleSet& rules_;
  const SimilarityProvider& similarity_;
  const MatchOptions& options_;
  std::vector<bool> query_used_;
  std::vector<bool> caption_used_;
  MatchResult result_;
};

}  // namespace

MatchResult match_phrases(const ParseOutput& query, const ParseOutput& caption,
                          const RuleSet& rules, const SimilarityProvider& similarity,
                          const MatchOptions& options) {
  if (rules.groups().empty()) throw Error(ErrorCode::kRuleSetInvalid, "empty rule set");
  return Matcher(query, caption, rules, similarity, options).run();
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed,
                                 decimals);
  return std::string(buf, end);
}

std::string strip_zeros(std::string text, std::size_t keep_decimals) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return text;
  while (text.size() > dot + 1 + keep_decimals && text.back() == '0') text.pop_back();
  if (text.back() == '.') text.pop_back();
  return text;
}

}  // namespace

std::string format_score(double value) { return strip_zeros(fixed(value, 3), 1); }

std::string format_overall(double value) {
  std::string out = strip_zeros(fixed(value, 3), 0);
  return out == "-0" ? "0" : out;
}

std::string render_trace(const MatchResult& result) {
  std::vector<std::array<std::string, 5>> lines;
  lines.push_back({"Query word", "Rule group", "Comparison", "Score", "Weight"});
  for (const auto& event : result.events) {
    const WordMatch& row = result.rows[event.row];
    std::string score;
    if (event.kind == TraceEvent::Kind::kUpScore) {
      score = format_score(row.score) + " (on up-score)";
    } else if (row.up_score != 1.0) {
      score = format_score(row.initial_score) + " (initially)";
    } else {
      score = format_score(row.score);
    }
    lines.push_back({row.query_word, row.unmatched() ? "-" : row.group, row.comparison, score,
                     format_score(row.weight)});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < 5; ++i) {
      out += line[i];
      if (i + 1 < 5) out += std::string(width[i] - line[i].size() + 2, ' ');
    }
    out += "\n";
  }
  out += "overall = " + format_overall(result.overall) + "\n";
  return out;
}

}  // namespace anvil
