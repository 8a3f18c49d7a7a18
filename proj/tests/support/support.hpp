#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "anvil/index.hpp"
#include "anvil/rules.hpp"
#include "anvil/text_analysis.hpp"

namespace anvil::test {

inline std::string data_path(std::string_view relative) {
  return (std::filesystem::path(ANVIL_DATA_DIR) / relative).string();
}

inline const Lexicon& lexicon() {
  static const Lexicon lex = Lexicon::load(data_path("lexicon/anvil.tsv"));
  return lex;
}

inline const RuleSet& example_rules() {
  static const RuleSet rules = parse_rules(read_file(data_path("rules/example.mr")));
  return rules;
}

inline const RuleSet& shipped_rules() {
  static const RuleSet rules = parse_rules(read_file(data_path("rules/anvil.mr")));
  return rules;
}

inline const std::vector<ContextRule>& shipped_context_rules() {
  static const auto rules = parse_context_rules(read_file(data_path("rules/contexts.cr")));
  return rules;
}

inline Resources shipped_resources() {
  Resources r;
  r.lexicon = lexicon();
  r.rules = shipped_rules();
  r.context_rules = shipped_context_rules();
  return r;
}

inline ParseOutput parse(std::string_view text) { return analyze(text, lexicon()); }

inline std::string listing(std::string_view text) {
  const ParseOutput p = parse(text);
  return render_structure(p.structure, p.tokens);
}

inline std::vector<CaptionInput> corpus(std::string_view relative) {
  return load_corpus(data_path(relative));
}

// Removes itself on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("anvil-" + std::string(tag) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Synthetic caption-like phrases: `words` content-ish tokens built from a
// small grammar so they stay parseable.
inline std::string synthetic_caption(std::mt19937& rng, std::size_t words) {
  static const std::vector<std::string> adjectives = {"black", "old",   "large", "small", "red",
                                                      "wooden", "white", "tall",  "grey",  "bright"};
  static const std::vector<std::string> nouns = {"camera", "table", "lens",   "house", "boat",
                                                 "car",    "tree",  "bridge", "lamp",  "chair",
                                                 "window", "dog",   "street", "wall",  "bottle"};
  static const std::vector<std::string> preps = {"on", "with", "near", "under", "beside"};
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  std::vector<std::string> w;
  auto coin = [&] { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; };
  auto np = [&] {
    if (coin()) w.push_back(pick(adjectives));
    w.push_back(pick(nouns));
  };
  if (words <= 1) return pick(nouns);
  np();
  while (w.size() + 4 <= words) {
    w.push_back(pick(preps));
    w.push_back("a");
    np();
  }
  // Top up with leading adjectives.
  while (w.size() < words) w.insert(w.begin(), pick(adjectives));
  std::string out;
  for (const auto& word : w) out += (out.empty() ? "" : " ") + word;
  return out;
}

}  // namespace anvil::test
