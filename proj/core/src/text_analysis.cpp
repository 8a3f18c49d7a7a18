#include "anvil/text_analysis.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "anvil/error.hpp"

namespace anvil {

// ---------------------------------------------------------------------------
// Lexicon

Lexicon Lexicon::parse(std::string_view tsv) {
  Lexicon lexicon;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= tsv.size()) {
    auto eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = tsv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (eol == tsv.size()) break;
      continue;
    }
    std::array<std::string_view, 3> fields;
    std::size_t start = 0;
    for (std::size_t f = 0; f < 3; ++f) {
      const auto tab = line.find('\t', start);
      if (f < 2 && tab == std::string_view::npos) {
        throw Error(ErrorCode::kSyntaxError,
                    "lexicon line " + std::to_string(line_no) + ": expected 3 columns");
      }
      fields[f] = line.substr(start, f < 2 ? tab - start : std::string_view::npos);
      start = tab + 1;
    }
    const auto tag = parse_pos(fields[2]);
    if (!tag) {
      throw Error(ErrorCode::kSyntaxError, "lexicon line " + std::to_string(line_no) +
                                               ": unknown part of speech '" +
                                               std::string(fields[2]) + "'");
    }
    lexicon.add(fields[0], fields[1], *tag);
    if (eol == tsv.size()) break;
  }
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read lexicon " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void Lexicon::add(std::string_view surface, std::string_view lemma, PartOfSpeech pos) {
  entries_.try_emplace(to_lower(surface), Entry{to_lower(lemma), pos});
}

const Lexicon::Entry* Lexicon::find(std::string_view surface) const {
  auto it = entries_.find(to_lower(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Phrase categories

std::string_view category_name(PhraseCategory category) {
  switch (category) {
    case PhraseCategory::kNP: return "NP";
    case PhraseCategory::kPP: return "PP";
    case PhraseCategory::kAP: return "AP";
    case PhraseCategory::kRelC: return "RELC";
  }
  return "NP";
}

std::optional<PhraseCategory> parse_category(std::string_view name) {
  if (name == "NP") return PhraseCategory::kNP;
  if (name == "PP") return PhraseCategory::kPP;
  if (name == "AP") return PhraseCategory::kAP;
  if (name == "RELC") return PhraseCategory::kRelC;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tokenizer

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) {
  // Bytes >= 0x80 belong to multi-byte UTF-8 letters.
  return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

constexpr std::string_view kPunctChars = ",.;:!?()[]{}\"/&*+=<>|`~";

bool is_punct_char(char c) { return kPunctChars.find(c) != std::string_view::npos; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  if (text.size() > kMaxPhraseLength) {
    throw Error(ErrorCode::kEmptyInput, "phrase longer than " +
                                            std::to_string(kMaxPhraseLength) + " characters");
  }
  std::vector<Token> tokens;
  auto push = [&](std::string surface) {
    Token t;
    t.surface = std::move(surface);
    t.position = tokens.size();
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    // A '.' or ',' between digits stays inside a number.
    const bool word_char = !is_punct_char(c) && c != '-' && c != '\'';
    if (!word_char) {
      // Runs of hyphens or a lone quote become one punctuation token.
      std::size_t j = i + 1;
      if (c == '-') {
        while (j < n && text[j] == '-') ++j;
      }
      push(std::string(text.substr(i, j - i)));
      i = j;
      continue;
    }
    std::size_t j = i;
    while (j < n) {
      const char d = text[j];
      if (is_space(d)) break;
      if (d == '-' || d == '\'') {
        // Internal hyphen or apostrophe: keep when a word character follows.
        if (j + 1 < n && is_alnum(text[j + 1])) {
          ++j;
          continue;
        }
        break;
      }
      if ((d == '.' || d == ',') && j > i && is_digit(text[j - 1]) && j + 1 < n &&
          is_digit(text[j + 1])) {
        ++j;
        continue;
      }
      if (is_punct_char(d)) break;
      ++j;
    }
    push(std::string(text.substr(i, j - i)));
    i = j;
  }
  if (tokens.empty()) throw Error(ErrorCode::kEmptyInput, "empty phrase");
  return tokens;
}

// ---------------------------------------------------------------------------
// Tagging

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return std::string_view("aeiou").find(c) != std::string_view::npos; }

// running -> run, stopped -> stop; fill and pass keep their doubles.
std::string undouble(std::string stem) {
  const auto n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
    stem.pop_back();
  }
  return stem;
}

bool is_number(std::string_view s) {
  if (s.empty() || !is_digit(s.front())) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return is_digit(c) || c == '.' || c == ','; });
}

bool all_punct(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return is_punct_char(c) || c == '-' || c == '\''; });
}

constexpr std::array<std::string_view, 10> kAdjSuffixes{
    "ous", "ful", "ive", "able", "ible", "less", "ish", "ical", "ic", "al"};

}  // namespace

std::string inflectional_lemma(std::string_view lower, PartOfSpeech pos) {
  std::string word(lower);
  if (pos == PartOfSpeech::kNoun) {
    if (word.size() > 4 && ends_with(word, "ies")) return word.substr(0, word.size() - 3) + "y";
    for (std::string_view es : {"sses", "ches", "shes", "xes", "zes"}) {
      if (word.size() > es.size() && ends_with(word, es)) return word.substr(0, word.size() - 2);
    }
    if (word.size() > 3 && ends_with(word, "s") && !ends_with(word, "ss") &&
        !ends_with(word, "us") && !ends_with(word, "is")) {
      return word.substr(0, word.size() - 1);
    }
    return word;
  }
  if (pos == PartOfSpeech::kVerb) {
    if (word.size() > 5 && ends_with(word, "ing")) return undouble(word.substr(0, word.size() - 3));
    if (word.size() > 4 && ends_with(word, "ied")) return word.substr(0, word.size() - 3) + "y";
    if (word.size() > 3 && ends_with(word, "ed")) return undouble(word.substr(0, word.size() - 2));
    return word;
  }
  return word;
}

std::vector<Token> tag_and_lemmatize(std::vector<Token> tokens, const Lexicon& lexicon) {
  for (auto& token : tokens) {
    const std::string lower = to_lower(token.surface);
    if (all_punct(token.surface)) {
      token.pos = PartOfSpeech::kPunct;
      token.lemma = token.surface;
      token.source = TagSource::kSuffix;
      continue;
    }
    if (const auto* entry = lexicon.find(lower)) {
      token.pos = entry->pos;
      token.lemma = entry->lemma.empty() ? lower : entry->lemma;
      token.source = TagSource::kLexicon;
      continue;
    }
    token.source = TagSource::kSuffix;
    if (is_number(lower)) {
      token.pos = PartOfSpeech::kNum;
    } else if (lower.size() >= 5 && ends_with(lower, "ing")) {
      token.pos = PartOfSpeech::kVerb;
    } else if (lower.size() >= 4 && ends_with(lower, "ed")) {
      token.pos = PartOfSpeech::kVerb;
    } else if (lower.size() >= 5 && ends_with(lower, "ly")) {
      token.pos = PartOfSpeech::kAdv;
    } else if (lower.size() >= 5 &&
               std::any_of(kAdjSuffixes.begin(), kAdjSuffixes.end(),
                           [&](std::string_view s) { return ends_with(lower, s); })) {
      token.pos = PartOfSpeech::kAdj;
    } else if (lower.size() >= 4 && ends_with(lower, "s") && !ends_with(lower, "ss") &&
               !ends_with(lower, "us") && !ends_with(lower, "is")) {
      token.pos = PartOfSpeech::kNoun;
    } else {
      token.pos = PartOfSpeech::kNoun;
      token.source = TagSource::kFallback;
    }
    token.lemma = inflectional_lemma(lower, token.pos);
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Chunking cascade

namespace {

enum class ChunkKind { kNP, kAP, kPrep, kRelPron, kCop, kConj, kComma, kVerb, kAdv, kStop, kOther };

struct Chunk {
  ChunkKind kind = ChunkKind::kOther;
  Span span;
  std::size_t head = 0;
};

class Cascade {
 public:
  explicit Cascade(std::vector<Token> tokens)
      : tokens_(std::move(tokens)), structure_(tokens_.size()) {}

  ParseOutput run() {
    mark_premodifiers();
    chunk();
    attach();
    finish();
    ParseOutput out;
    out.tokens = std::move(tokens_);
    out.structure = std::move(structure_);
    out.bracketing = std::move(forest_);
    out.unattached = std::move(unattached_);
    return out;
  }

 private:
  PartOfSpeech pos(std::size_t i) const { return tokens_[i].pos; }
  bool nounish(std::size_t i) const {
    return pos(i) == PartOfSpeech::kNoun || pos(i) == PartOfSpeech::kNum;
  }

  // Pass 0: participles and adverbs that sit inside a base NP.
  void mark_premodifiers() {
    const std::size_t n = tokens_.size();
    premod_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (pos(i) != PartOfSpeech::kVerb || i + 1 >= n) continue;
      const auto next = pos(i + 1);
      const bool before_np = next == PartOfSpeech::kAdj || next == PartOfSpeech::kNoun ||
                             next == PartOfSpeech::kNum;
      const bool after_noun = i > 0 && nounish(i - 1);
      premod_[i] = before_np && !after_noun;
    }
    // An adverb joins the NP when it modifies a following adjective.
    for (std::size_t k = n; k-- > 0;) {
      if (pos(k) != PartOfSpeech::kAdv || k + 1 >= n) continue;
      const auto next = pos(k + 1);
      premod_[k] = next == PartOfSpeech::kAdj ||
                   (next == PartOfSpeech::kVerb && premod_[k + 1]) ||
                   (next == PartOfSpeech::kAdv && premod_[k + 1]);
    }
  }

  bool np_material(std::size_t i) const {
    switch (pos(i)) {
      case PartOfSpeech::kAdj:
      case PartOfSpeech::kNoun:
      case PartOfSpeech::kNum:
        return true;
      case PartOfSpeech::kVerb:
      case PartOfSpeech::kAdv:
        return premod_[i];
      default:
        return false;
    }
  }

  // Pass 1: base NPs, adjective phrases and single-token chunks.
  void chunk() {
    const std::size_t n = tokens_.size();
    std::size_t i = 0;
    while (i < n) {
      const std::size_t start = i;
      std::size_t j = i;
      while (j < n && pos(j) == PartOfSpeech::kDet) ++j;
      std::size_t end = j;
      while (end < n && np_material(end)) ++end;
      if (end > j) {
        std::optional<std::size_t> head;
        for (std::size_t k = j; k < end; ++k) {
          if (nounish(k)) head = k;
        }
        if (head) {
          internal_links(j, *head, *head);
          chunks_.push_back({ChunkKind::kNP, {start, *head + 1}, *head});
          i = *head + 1;
        } else {
          std::size_t ap_head = end - 1;
          while (ap_head > j && pos(ap_head) == PartOfSpeech::kAdv) --ap_head;
          internal_links(j, ap_head, end - 1);
          chunks_.push_back({ChunkKind::kAP, {start, end}, ap_head});
          i = end;
        }
        continue;
      }
      // Determiners with nothing to determine.
      if (j > i) {
        for (std::size_t k = i; k < j; ++k) chunks_.push_back({ChunkKind::kOther, {k, k + 1}, k});
        i = j;
        continue;
      }
      chunks_.push_back({single_kind(i), {i, i + 1}, i});
      ++i;
    }
  }

  ChunkKind single_kind(std::size_t i) const {
    switch (pos(i)) {
      case PartOfSpeech::kPrep: return ChunkKind::kPrep;
      case PartOfSpeech::kRelPron: return ChunkKind::kRelPron;
      case PartOfSpeech::kCop: return ChunkKind::kCop;
      case PartOfSpeech::kConj: return ChunkKind::kConj;
      case PartOfSpeech::kVerb: return ChunkKind::kVerb;
      case PartOfSpeech::kAdv: return ChunkKind::kAdv;
      case PartOfSpeech::kPunct: {
        const auto& s = tokens_[i].surface;
        if (s == "," || s == ";") return ChunkKind::kComma;
        return ChunkKind::kStop;
      }
      default: return ChunkKind::kOther;
    }
  }

  // Links inside one chunk [first, last]: nouns modify the next noun of a
  // compound, adjectives and participles modify the head, adverbs modify
  // the word after them (negation skips further adverbs).
  void internal_links(std::size_t first, std::size_t head, std::size_t last) {
    for (std::size_t p = first; p <= last; ++p) {
      if (p == head) continue;
      switch (pos(p)) {
        case PartOfSpeech::kNoun:
        case PartOfSpeech::kNum:
          if (p < head && nounish(p + 1)) {
            link(Var::kMod, p + 1, p);
          } else {
            link(Var::kMod, head, p);
          }
          break;
        case PartOfSpeech::kAdv: {
          // Negation scopes over the adverbs after it: "not very wet".
          std::size_t target = p + 1;
          if (tokens_[p].lemma == "not") {
            while (target <= last && pos(target) == PartOfSpeech::kAdv) ++target;
          }
          link(Var::kAmod, target <= last ? target : head, p);
          break;
        }
        default:
          link(Var::kMod, head, p);
          break;
      }
    }
  }

  void link(Var var, std::size_t anchor, std::size_t dependent) {
    structure_.add_link(var, anchor, dependent);
  }

  void add_head(std::size_t h) {
    structure_.add_head(h);
    group_.push_back(h);
  }

  PhraseNode node(PhraseCategory category, Span span) const {
    return PhraseNode{category, span, {}};
  }
  PhraseNode node_of(const Chunk& c) const {
    return node(c.kind == ChunkKind::kAP ? PhraseCategory::kAP : PhraseCategory::kNP, c.span);
  }

  bool follows_directly(std::size_t idx, ChunkKind kind) const {
    return idx > 0 && chunks_[idx - 1].kind == kind;
  }

  // True for an adjective phrase that coordinates into a following NP, as
  // in "black and white photograph".
  bool coordinated_premodifier(std::size_t idx) const {
    if (idx + 2 >= chunks_.size()) return false;
    const auto sep = chunks_[idx + 1].kind;
    const auto next = chunks_[idx + 2].kind;
    return (sep == ChunkKind::kConj || sep == ChunkKind::kComma) &&
           (next == ChunkKind::kAP || next == ChunkKind::kNP);
  }

  void clear_pending() {
    pending_ = Pending::kNone;
    pending_advs_.clear();
  }

  // Pass 2-4: prepositional attachment, relative clauses, participles and
  // coordination, driven left to right over the chunks.
  void attach() {
    for (std::size_t idx = 0; idx < chunks_.size(); ++idx) {
      const Chunk& c = chunks_[idx];
      switch (c.kind) {
        case ChunkKind::kNP:
        case ChunkKind::kAP:
          on_phrase(idx);
          break;
        case ChunkKind::kPrep: {
          std::vector<std::size_t> sites;
          if (participle_) {
            sites.push_back(*participle_);
          } else if (!group_.empty()) {
            sites = group_;
          } else if (last_noun_) {
            sites.push_back(*last_noun_);
          }
          for (std::size_t s : sites) link(Var::kPrep, s, c.head);
          clear_pending();
          pending_ = Pending::kPrepObj;
          pending_word_ = c.head;
          pending_start_ = c.span.start;
          break;
        }
        case ChunkKind::kRelPron:
          clear_pending();
          if (last_noun_ && follows_directly(idx, ChunkKind::kNP)) {
            link(Var::kRel, *last_noun_, c.head);
            pending_ = Pending::kRel;
            pending_word_ = c.head;
            pending_start_ = c.span.start;
          }
          break;
        case ChunkKind::kCop:
          if (pending_ == Pending::kRel) {
            link(Var::kCop, pending_word_, c.head);
          } else {
            clear_pending();
            pending_start_ = c.span.start;
          }
          pending_ = Pending::kCopComp;
          pending_word_ = c.head;
          break;
        case ChunkKind::kAdv:
          if (pending_ == Pending::kCopComp) pending_advs_.push_back(c.head);
          break;
        case ChunkKind::kVerb: {
          clear_pending();
          std::optional<std::size_t> site;
          if (follows_directly(idx, ChunkKind::kNP) && last_noun_) {
            site = last_noun_;
          } else if (!group_.empty()) {
            site = group_.back();
          }
          if (site) link(Var::kMod, *site, c.head);
          participle_ = c.head;
          pending_ = Pending::kVerbObj;
          pending_word_ = c.head;
          break;
        }
        case ChunkKind::kComma:
        case ChunkKind::kConj:
          clear_pending();
          participle_.reset();
          break;
        case ChunkKind::kStop:
          clear_pending();
          participle_.reset();
          break;
        case ChunkKind::kOther:
          break;
      }
    }
  }

  void on_phrase(std::size_t idx) {
    const Chunk& c = chunks_[idx];
    const bool is_np = c.kind == ChunkKind::kNP;
    switch (pending_) {
      case Pending::kPrepObj: {
        link(Var::kPhead, pending_word_, c.head);
        PhraseNode pp = node(PhraseCategory::kPP, {pending_start_, c.span.end});
        pp.children.push_back(node_of(c));
        forest_.push_back(std::move(pp));
        clear_pending();
        if (is_np) last_noun_ = c.head;
        absorb_deferred(c.head);
        return;
      }
      case Pending::kVerbObj:
        link(Var::kVhead, pending_word_, c.head);
        forest_.push_back(node_of(c));
        clear_pending();
        if (is_np) last_noun_ = c.head;
        absorb_deferred(c.head);
        return;
      case Pending::kCopComp: {
        link(Var::kVhead, pending_word_, c.head);
        for (std::size_t adv : pending_advs_) link(Var::kAmod, c.head, adv);
        PhraseNode relc = node(PhraseCategory::kRelC, {pending_start_, c.span.end});
        relc.children.push_back(node_of(c));
        forest_.push_back(std::move(relc));
        clear_pending();
        return;
      }
      case Pending::kRel:
        clear_pending();
        break;
      case Pending::kNone:
        break;
    }

    if (!is_np) {
      if (follows_directly(idx, ChunkKind::kNP) && last_noun_) {
        // Postpositive adjective.
        link(Var::kMod, *last_noun_, c.head);
        forest_.push_back(node_of(c));
        return;
      }
      if (coordinated_premodifier(idx)) {
        deferred_.push_back(c.head);
        forest_.push_back(node_of(c));
        return;
      }
      // A leading adjective phrase with no noun right after it names the
      // thing itself ("close-up of a flower").
      const bool np_follows = idx + 1 < chunks_.size() && chunks_[idx + 1].kind == ChunkKind::kNP;
      if (group_.empty() && (!has_noun_ahead(idx) || !np_follows)) {
        add_head(c.head);
        forest_.push_back(node_of(c));
      }
      return;
    }

    // Top-level NP: first conjunct, next conjunct, or an unseparated NP,
    // which is treated as another conjunct.
    absorb_deferred(c.head);
    add_head(c.head);
    participle_.reset();
    last_noun_ = c.head;
    forest_.push_back(node_of(c));
  }

  bool has_noun_ahead(std::size_t idx) const {
    for (std::size_t k = idx + 1; k < chunks_.size(); ++k) {
      if (chunks_[k].kind == ChunkKind::kNP) return true;
    }
    return false;
  }

  void absorb_deferred(std::size_t head) {
    for (std::size_t d : deferred_) link(Var::kMod, head, d);
    deferred_.clear();
  }

  void finish() {
    if (structure_.heads().empty()) fallback_head();
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (!is_content(pos(i))) continue;
      if (structure_.is_head(i) || structure_.is_dependent_anywhere(i)) continue;
      unattached_.push_back(i);
    }
  }

  // No top-level phrase was found. A noun that anchors links but depends on
  // nothing becomes the head; failing that the last noun (else the last
  // content word) does, and any links that reach it are dropped.
  void fallback_head() {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (pos(i) == PartOfSpeech::kNoun && !structure_.is_dependent_anywhere(i)) {
        structure_.add_head(i);
        return;
      }
    }
    std::optional<std::size_t> head;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (pos(i) == PartOfSpeech::kNoun) head = i;
    }
    if (!head) {
      for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (is_content(pos(i))) head = i;
      }
    }
    if (!head) {
      for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (pos(i) != PartOfSpeech::kPunct) head = i;
      }
    }
    if (!head) return;
    if (structure_.is_dependent_anywhere(*head)) structure_ = DependencyStructure(tokens_.size());
    structure_.add_head(*head);
  }

  enum class Pending { kNone, kPrepObj, kVerbObj, kRel, kCopComp };

  std::vector<Token> tokens_;
  DependencyStructure structure_;
  std::vector<bool> premod_;
  std::vector<Chunk> chunks_;
  std::vector<PhraseNode> forest_;
  std::vector<std::size_t> unattached_;

  std::vector<std::size_t> group_;
  std::optional<std::size_t> participle_;
  std::optional<std::size_t> last_noun_;
  std::vector<std::size_t> deferred_;
  Pending pending_ = Pending::kNone;
  std::size_t pending_word_ = 0;
  std::size_t pending_start_ = 0;
  std::vector<std::size_t> pending_advs_;
};

}  // namespace

ParseOutput parse_tagged(std::vector<Token> tokens) {
  const bool has_word = std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
    return t.pos != PartOfSpeech::kPunct;
  });
  if (!has_word) throw Error(ErrorCode::kEmptyInput, "phrase has no words");
  return Cascade(std::move(tokens)).run();
}

ParseOutput analyze(std::string_view text, const Lexicon& lexicon) {
  return parse_tagged(tag_and_lemmatize(tokenize(text), lexicon));
}

}  // namespace anvil
