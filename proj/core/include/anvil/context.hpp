#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anvil/matcher.hpp"
#include "anvil/rules.hpp"
#include "anvil/text_analysis.hpp"

namespace anvil {

// A matched caption word and an unmatched phrase hanging off it.
struct ContextPair {
  std::size_t anchor_pos = 0;
  std::string anchor_surface;
  std::string anchor_lemma;
  Span context_span;
  std::string context_text;
  // NP, PP, AP, RELC, or "word" for a bare word.
  std::string category;
  std::size_t rule_index = 0;

  bool operator==(const ContextPair&) const = default;
};

// <camera [phead:prep], [on a table]PP>   or   <lens [mod], zoom>
std::string render_context(const ContextPair& pair, const std::vector<ContextRule>& rules);

// Walks the matched caption words in position order; for each, every still
// available unmatched word that some rule reaches yields the smallest
// phrase of the rule's category around it (the bare word for '*'), and the
// word stops being available. Phrases containing a matched word are never
// returned.
std::vector<ContextPair> extract_contexts(const MatchResult& match, const ParseOutput& caption,
                                          const std::vector<ContextRule>& rules);

// Lower-cased, whitespace-collapsed context text used as the grouping key.
std::string normalize_context(std::string_view text);

inline constexpr std::string_view kNoContext = "{none}";

struct ContextGroup {
  std::string anchor_lemma;
  std::string context_text;
  std::vector<std::string> caption_ids;
  std::size_t count = 0;

  bool operator==(const ContextGroup&) const = default;
};

struct CaptionContexts {
  std::string caption_id;
  std::vector<ContextPair> contexts;
};

// Groups captions by (anchor lemma, normalized context). A caption with no
// contexts at all joins the {none} group of `none_anchor`; when that is
// empty the most frequent anchor lemma is used. Sorted by count descending,
// then context text, then anchor.
std::vector<ContextGroup> group_by_context(const std::vector<CaptionContexts>& results,
                                           std::string_view none_anchor = {});

}  // namespace anvil
