#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anvil/dependency.hpp"
#include "anvil/token.hpp"

namespace anvil {

// Surface -> (lemma, part of speech) table. Read-only once constructed.
//
// File format: UTF-8 TSV with columns surface, lemma, pos; '#' starts a
// comment line. Lookup is case-insensitive. When a surface is listed more
// than once the first row wins.
class Lexicon {
 public:
  struct Entry {
    std::string lemma;
    PartOfSpeech pos = PartOfSpeech::kNoun;
  };

  Lexicon() = default;

  static Lexicon parse(std::string_view tsv);
  static Lexicon load(const std::filesystem::path& file);

  void add(std::string_view surface, std::string_view lemma, PartOfSpeech pos);
  const Entry* find(std::string_view surface) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, Entry> entries_;
};

enum class PhraseCategory { kNP, kPP, kAP, kRelC };

std::string_view category_name(PhraseCategory category);
std::optional<PhraseCategory> parse_category(std::string_view name);

// Half-open token range [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  bool contains(std::size_t position) const noexcept {
    return position >= start && position < end;
  }
  bool operator==(const Span&) const = default;
};

struct PhraseNode {
  PhraseCategory category = PhraseCategory::kNP;
  Span span;
  std::vector<PhraseNode> children;

  bool operator==(const PhraseNode&) const = default;
};

struct ParseOutput {
  std::vector<Token> tokens;
  DependencyStructure structure;
  std::vector<PhraseNode> bracketing;
  // Content words the grammar could not attach (degraded parse).
  std::vector<std::size_t> unattached;

  bool operator==(const ParseOutput&) const = default;
};

inline constexpr std::size_t kMaxPhraseLength = 10'000;

std::string to_lower(std::string_view text);

// Splits on whitespace and punctuation; hyphens and apostrophes inside a
// word keep it whole. Lemma and tag are left unset. Throws EmptyInput for
// blank text and for text over kMaxPhraseLength characters.
std::vector<Token> tokenize(std::string_view text);

// Fills lemma and tag: lexicon first, then suffix rules, then noun.
std::vector<Token> tag_and_lemmatize(std::vector<Token> tokens, const Lexicon& lexicon);

// Inflectional lemma for a word already known to carry `pos`.
std::string inflectional_lemma(std::string_view lower, PartOfSpeech pos);

// Full analysis: tokenize, tag, then the chunking cascade producing the
// dependency structure and the phrase bracketing. Deterministic.
ParseOutput analyze(std::string_view text, const Lexicon& lexicon);

// The cascade alone, over already tagged tokens.
ParseOutput parse_tagged(std::vector<Token> tokens);

// Calls `fn` on every node of the forest, parents before children.
template <typename Fn>
void for_each_phrase(const std::vector<PhraseNode>& forest, Fn&& fn) {
  for (const auto& node : forest) {
    fn(node);
    for_each_phrase(node.children, fn);
  }
}

}  // namespace anvil
