#include "anvil/context.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace anvil {

namespace {

bool pos_matches(const std::vector<PartOfSpeech>& wanted, PartOfSpeech pos) {
  return wanted.empty() || std::find(wanted.begin(), wanted.end(), pos) != wanted.end();
}

bool in_var(const ContextRule& rule, const DependencyStructure& structure, std::size_t word) {
  if (rule.matched_is_head) return structure.is_head(word);
  if (!rule.matched_var) return true;
  return structure.is_dependent(*rule.matched_var, word);
}

std::string span_text(const std::vector<Token>& tokens, Span span) {
  std::string out;
  for (std::size_t i = span.start; i < span.end; ++i) {
    if (!out.empty() && tokens[i].pos != PartOfSpeech::kPunct) out += ' ';
    out += tokens[i].surface;
  }
  return out;
}

// Smallest phrase of the category around `word` holding no matched word.
std::optional<Span> smallest_phrase(const ParseOutput& caption, PhraseCategory category,
                                    std::size_t word, const std::vector<bool>& matched) {
  std::optional<Span> best;
  for_each_phrase(caption.bracketing, [&](const PhraseNode& node) {
    if (node.category != category || !node.span.contains(word)) return;
    for (std::size_t i = node.span.start; i < node.span.end; ++i) {
      if (matched[i]) return;
    }
    if (!best || node.span.size() < best->size()) best = node.span;
  });
  return best;
}

}  // namespace

std::string render_context(const ContextPair& pair, const std::vector<ContextRule>& rules) {
  std::string path = pair.rule_index < rules.size() ? rules[pair.rule_index].path.str() : "";
  std::string text = pair.context_text;
  if (pair.category != "word") text = "[" + text + "]" + pair.category;
  return "<" + pair.anchor_surface + " [" + path + "], " + text + ">";
}

std::vector<ContextPair> extract_contexts(const MatchResult& match, const ParseOutput& caption,
                                          const std::vector<ContextRule>& rules) {
  const auto& tokens = caption.tokens;
  std::vector<bool> matched(tokens.size(), false);
  for (std::size_t p : match.matched_caption) {
    if (p < matched.size()) matched[p] = true;
  }
  std::vector<bool> available(tokens.size(), false);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    available[i] = !matched[i] && tokens[i].pos != PartOfSpeech::kPunct;
  }

  std::vector<ContextPair> out;
  for (std::size_t t : match.matched_caption) {
    if (t >= tokens.size()) continue;
    for (std::size_t u = 0; u < tokens.size(); ++u) {
      if (!available[u]) continue;
      for (std::size_t r = 0; r < rules.size(); ++r) {
        const ContextRule& rule = rules[r];
        if (!pos_matches(rule.matched_pos, tokens[t].pos)) continue;
        if (!in_var(rule, caption.structure, t)) continue;
        if (!pos_matches(rule.context_pos, tokens[u].pos)) continue;
        if (!on_path(caption.structure, rule.path, t, u)) continue;

        Span span{u, u + 1};
        std::string category = "word";
        if (rule.category) {
          const auto phrase = smallest_phrase(caption, *rule.category, u, matched);
          if (!phrase) continue;
          span = *phrase;
          category = std::string(category_name(*rule.category));
        }
        ContextPair pair;
        pair.anchor_pos = t;
        pair.anchor_surface = tokens[t].surface;
        pair.anchor_lemma = tokens[t].lemma;
        pair.context_span = span;
        pair.context_text = span_text(tokens, span);
        pair.category = std::move(category);
        pair.rule_index = r;
        out.push_back(std::move(pair));
        available[u] = false;
        break;
      }
    }
  }
  return out;
}

std::string normalize_context(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<ContextGroup> group_by_context(const std::vector<CaptionContexts>& results,
                                           std::string_view none_anchor) {
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> groups;
  std::map<std::string, std::size_t> anchor_frequency;
  std::vector<std::string> without_context;

  for (const auto& caption : results) {
    if (caption.contexts.empty()) {
      without_context.push_back(caption.caption_id);
      continue;
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& pair : caption.contexts) {
      auto key = std::make_pair(pair.anchor_lemma, normalize_context(pair.context_text));
      ++anchor_frequency[pair.anchor_lemma];
      if (seen.insert(key).second) groups[key].push_back(caption.caption_id);
    }
  }

  if (!without_context.empty()) {
    std::string anchor(none_anchor);
    if (anchor.empty()) {
      std::size_t best = 0;
      for (const auto& [lemma, n] : anchor_frequency) {
        if (n > best) {
          best = n;
          anchor = lemma;
        }
      }
    }
    auto& ids = groups[{anchor, std::string(kNoContext)}];
    ids.insert(ids.end(), without_context.begin(), without_context.end());
  }

  std::vector<ContextGroup> out;
  for (auto& [key, ids] : groups) {
    ContextGroup g;
    g.anchor_lemma = key.first;
    g.context_text = key.second;
    g.count = ids.size();
    g.caption_ids = std::move(ids);
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const ContextGroup& a, const ContextGroup& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.context_text != b.context_text) return a.context_text < b.context_text;
    return a.anchor_lemma < b.anchor_lemma;
  });
  return out;
}

}  // namespace anvil
