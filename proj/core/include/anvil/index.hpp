#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anvil/context.hpp"
#include "anvil/matcher.hpp"
#include "anvil/rules.hpp"
#include "anvil/text_analysis.hpp"

namespace anvil {

struct CaptionInput {
  std::string id;
  std::string caption;
  std::optional<std::string> image_uri;
};

struct CaptionRecord {
  std::string id;
  std::string caption;
  std::optional<std::string> image_uri;
  ParseOutput parse;

  bool operator==(const CaptionRecord&) const = default;
};

struct Posting {
  std::string id;
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

// Analysed caption records plus the term index used by simple matching.
// Postings are sorted by id. The weight of a term in a caption is
// tf * idf with idf = ln(1 + N / df); norms are the Euclidean lengths of
// those vectors.
struct Index {
  std::map<std::string, CaptionRecord> records;
  std::map<std::string, std::vector<Posting>> postings;
  std::map<std::string, double> norms;
  // Free-form provenance persisted in the manifest (rule-file hashes...).
  std::map<std::string, std::string> metadata;

  std::size_t doc_count() const noexcept { return records.size(); }
  double idf(std::string_view term) const;

  bool operator==(const Index&) const = default;
};

// Lemmas of the content words, one entry per occurrence.
std::vector<std::string> index_terms(const ParseOutput& parse);

// Errors: DuplicateId, EmptyCaption.
Index build_index(const std::vector<CaptionInput>& corpus, const Lexicon& lexicon);

// Adds records to a copy of `index` and recomputes postings and norms.
Index add_records(const Index& index, const std::vector<CaptionInput>& corpus,
                  const Lexicon& lexicon);

// JSON Lines: {"id": ..., "caption": ..., "image_uri": ...} per line.
std::vector<CaptionInput> parse_corpus(std::string_view jsonl);
std::vector<CaptionInput> load_corpus(const std::filesystem::path& file);

// tf-idf cosine ranking of the captions sharing a term with the query; top
// k by score, ties by id. Terms absent from the index are ignored.
// Errors: EmptyQuery.
std::vector<std::pair<std::string, double>> simple_match(const Index& index,
                                                         const std::vector<std::string>& terms,
                                                         std::size_t k);

// Everything besides the index the pipeline needs.
struct Resources {
  Lexicon lexicon;
  RuleSet rules;
  std::vector<ContextRule> context_rules;
  SimilarityProvider similarity;
  MatchOptions match_options;
};

struct RetrievalParams {
  std::size_t k_candidates = 100;
  std::size_t limit = 10;
  double alpha = 0.8;
};

struct QueryResult {
  std::string id;
  std::string caption;
  std::optional<std::string> image_uri;
  double combined_score = 0.0;
  double phrase_score = 0.0;
  double simple_score = 0.0;
  std::vector<ContextPair> contexts;

  bool operator==(const QueryResult&) const = default;
};

// Simple matching for candidates, phrase matching of each candidate, then
// combined = alpha * phrase + (1 - alpha) * simple. Sorted by combined
// score, ties by id; contexts are extracted for the returned results.
// Errors: EmptyQuery, IndexEmpty.
std::vector<QueryResult> retrieve(const Index& index, std::string_view query_text,
                                  const Resources& resources, const RetrievalParams& params);

// Directory layout: manifest.json, records.jsonl, postings.txt, norms.txt.
// Errors: IoError, FormatVersionMismatch.
inline constexpr int kIndexFormatVersion = 1;
void save_index(const Index& index, const std::filesystem::path& directory);
Index load_index(const std::filesystem::path& directory);

// 64-bit FNV-1a, hex encoded; used for provenance hashes in the manifest.
std::string content_hash(std::string_view data);

// Holds the current immutable index. Readers take a snapshot and keep it
// for as long as they need; a writer replaces the whole index at once.
class IndexStore {
 public:
  std::shared_ptr<const Index> snapshot() const;
  void publish(Index index);
  bool loaded() const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const Index> current_;
};

}  // namespace anvil
