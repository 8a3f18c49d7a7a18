#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace anvil {

enum class PartOfSpeech {
  kNoun,
  kVerb,
  kAdj,
  kAdv,
  kDet,
  kPrep,
  kRelPron,
  kCop,
  kConj,
  kNum,
  kPunct,
  kOther,
};

std::string_view pos_name(PartOfSpeech pos);
std::optional<PartOfSpeech> parse_pos(std::string_view name);

// Nouns, verbs, adjectives, adverbs and numbers: the words that carry
// scores, index terms and contexts.
bool is_content(PartOfSpeech pos);

// Where a token's tag came from. kFallback marks the default-noun guess for
// words neither the lexicon nor the suffix rules recognised.
enum class TagSource { kUnset, kLexicon, kSuffix, kFallback };

struct Token {
  std::string surface;
  std::string lemma;
  PartOfSpeech pos = PartOfSpeech::kOther;
  std::size_t position = 0;
  TagSource source = TagSource::kUnset;

  bool operator==(const Token&) const = default;
};

}  // namespace anvil
