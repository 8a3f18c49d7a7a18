#include "anvil/index.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "anvil/error.hpp"
#include "anvil/json_codec.hpp"

namespace anvil {

namespace fs = std::filesystem;

double Index::idf(std::string_view term) const {
  const auto it = postings.find(std::string(term));
  if (it == postings.end() || it->second.empty()) return 0.0;
  return std::log(1.0 + static_cast<double>(doc_count()) / static_cast<double>(it->second.size()));
}

std::vector<std::string> index_terms(const ParseOutput& parse) {
  std::vector<std::string> terms;
  for (const auto& token : parse.tokens) {
    if (is_content(token.pos)) terms.push_back(token.lemma);
  }
  return terms;
}

namespace {

bool blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

std::map<std::string, std::uint32_t> term_counts(const std::vector<std::string>& terms) {
  std::map<std::string, std::uint32_t> counts;
  for (const auto& t : terms) ++counts[t];
  return counts;
}

void rebuild_postings(Index& index) {
  index.postings.clear();
  index.norms.clear();
  std::map<std::string, std::map<std::string, std::uint32_t>> per_record;
  for (const auto& [id, record] : index.records) {
    auto counts = term_counts(index_terms(record.parse));
    for (const auto& [term, tf] : counts) index.postings[term].push_back({id, tf});
    per_record.emplace(id, std::move(counts));
  }
  for (const auto& [id, counts] : per_record) {
    double sum = 0.0;
    for (const auto& [term, tf] : counts) {
      const double w = tf * index.idf(term);
      sum += w * w;
    }
    index.norms[id] = std::sqrt(sum);
  }
}

CaptionRecord analyze_record(const CaptionInput& input, const Lexicon& lexicon) {
  if (blank(input.caption)) throw Error(ErrorCode::kEmptyCaption, "empty caption: " + input.id);
  CaptionRecord record{input.id, input.caption, input.image_uri, {}};
  try {
    record.parse = analyze(input.caption, lexicon);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmptyInput) {
      throw Error(ErrorCode::kEmptyCaption, "caption has no words: " + input.id);
    }
    throw;
  }
  return record;
}

}  // namespace

Index add_records(const Index& index, const std::vector<CaptionInput>& corpus,
                  const Lexicon& lexicon) {
  Index out = index;
  for (const auto& input : corpus) {
    if (out.records.count(input.id) != 0) {
      throw Error(ErrorCode::kDuplicateId, "duplicate caption id: " + input.id);
    }
    out.records.emplace(input.id, analyze_record(input, lexicon));
  }
  rebuild_postings(out);
  return out;
}

Index build_index(const std::vector<CaptionInput>& corpus, const Lexicon& lexicon) {
  return add_records(Index{}, corpus, lexicon);
}

std::vector<CaptionInput> parse_corpus(std::string_view jsonl) {
  std::vector<CaptionInput> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (blank(line)) continue;
    Json json;
    try {
      json = Json::parse(line);
    } catch (const Json::exception& e) {
      throw SyntaxError(ErrorCode::kSyntaxError, line_no, 0, std::string("bad JSON: ") + e.what());
    }
    if (!json.is_object() || !json.contains("id") || !json["id"].is_string() ||
        !json.contains("caption") || !json["caption"].is_string()) {
      throw SyntaxError(ErrorCode::kSyntaxError, line_no, 0,
                        "each line needs string fields id and caption");
    }
    CaptionInput input{json["id"].get<std::string>(), json["caption"].get<std::string>(), {}};
    if (json.contains("image_uri") && json["image_uri"].is_string()) {
      input.image_uri = json["image_uri"].get<std::string>();
    }
    out.push_back(std::move(input));
  }
  return out;
}

std::vector<CaptionInput> load_corpus(const fs::path& file) {
  return parse_corpus(read_file(file.string()));
}

std::vector<std::pair<std::string, double>> simple_match(const Index& index,
                                                         const std::vector<std::string>& terms,
                                                         std::size_t k) {
  if (terms.empty()) throw Error(ErrorCode::kEmptyQuery, "query has no terms");
  std::map<std::string, double> query;
  for (const auto& [term, tf] : term_counts(terms)) {
    const double idf = index.idf(term);
    if (idf > 0.0) query[term] = tf * idf;
  }
  double query_norm = 0.0;
  for (const auto& [term, w] : query) query_norm += w * w;
  query_norm = std::sqrt(query_norm);
  if (query_norm == 0.0 || k == 0) return {};

  std::map<std::string, double> dots;
  for (const auto& [term, qw] : query) {
    const double idf = index.idf(term);
    for (const auto& posting : index.postings.at(term)) {
      dots[posting.id] += qw * posting.tf * idf;
    }
  }
  std::vector<std::pair<std::string, double>> ranked;
  ranked.reserve(dots.size());
  for (const auto& [id, dot] : dots) {
    const double norm = index.norms.at(id);
    double score = norm > 0.0 ? dot / (norm * query_norm) : 0.0;
    ranked.emplace_back(id, std::clamp(score, 0.0, 1.0));
  }
  auto by_score = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  if (ranked.size() > k) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end(),
                      by_score);
    ranked.resize(k);
  } else {
    std::sort(ranked.begin(), ranked.end(), by_score);
  }
  return ranked;
}

std::vector<QueryResult> retrieve(const Index& index, std::string_view query_text,
                                  const Resources& resources, const RetrievalParams& params) {
  if (index.doc_count() == 0) throw Error(ErrorCode::kIndexEmpty, "index is empty");
  ParseOutput query;
  try {
    query = analyze(query_text, resources.lexicon);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmptyInput) throw Error(ErrorCode::kEmptyQuery, "empty query");
    throw;
  }
  const auto terms = index_terms(query);
  if (terms.empty()) return {};

  // Without a head the matcher has nothing to start from.
  const double alpha = query.structure.heads().empty() ? 0.0 : params.alpha;

  std::vector<QueryResult> results;
  std::vector<MatchResult> matches;
  for (const auto& [id, simple] : simple_match(index, terms, std::max<std::size_t>(params.k_candidates, 1))) {
    const CaptionRecord& record = index.records.at(id);
    QueryResult r;
    r.id = id;
    r.caption = record.caption;
    r.image_uri = record.image_uri;
    r.simple_score = simple;
    MatchResult match;
    if (alpha > 0.0) {
      match = match_phrases(query, record.parse, resources.rules, resources.similarity,
                            resources.match_options);
      r.phrase_score = match.overall;
    }
    r.combined_score = alpha * r.phrase_score + (1.0 - alpha) * r.simple_score;
    results.push_back(std::move(r));
    matches.push_back(std::move(match));
  }

  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].combined_score != results[b].combined_score) {
      return results[a].combined_score > results[b].combined_score;
    }
    return results[a].id < results[b].id;
  });
  if (order.size() > params.limit) order.resize(params.limit);

  std::vector<QueryResult> out;
  out.reserve(order.size());
  for (std::size_t i : order) {
    QueryResult r = std::move(results[i]);
    if (alpha > 0.0) {
      r.contexts = extract_contexts(matches[i], index.records.at(r.id).parse, resources.context_rules);
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---- persistence -----------------------------------------------------------

namespace {

std::string escape_field(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\' || i + 1 == text.size()) {
      out += text[i];
      continue;
    }
    switch (text[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += text[i];
    }
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + file.string());
}

std::string read_or_throw(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line(text.data() + start, end - start);
    if (!line.empty()) fn(line, line_no);
    start = end + 1;
  }
}

template <typename T>
T parse_number(std::string_view field, const std::string& where) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kIoError, "bad number in " + where + ": " + std::string(field));
  }
  return value;
}

double parse_double(std::string_view field, const std::string& where) {
  const std::string text(field);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || errno == ERANGE) {
    throw Error(ErrorCode::kIoError, "bad number in " + where + ": " + text);
  }
  return v;
}

}  // namespace

void save_index(const Index& index, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + directory.string() + ": " + ec.message());

  std::string records;
  for (const auto& [id, r] : index.records) {
    Json line{{"id", r.id}, {"caption", r.caption}, {"parse", parse_to_json(r.parse)}};
    if (r.image_uri) line["image_uri"] = *r.image_uri;
    records += dump_json(line) + "\n";
  }
  std::string postings;
  for (const auto& [term, list] : index.postings) {
    postings += escape_field(term);
    for (const auto& p : list) postings += "\t" + escape_field(p.id) + "\t" + std::to_string(p.tf);
    postings += "\n";
  }
  std::string norms;
  for (const auto& [id, norm] : index.norms) norms += escape_field(id) + "\t" + format_double(norm) + "\n";

  Json manifest{{"format_version", kIndexFormatVersion},
                {"documents", index.doc_count()},
                {"terms", index.postings.size()},
                {"alpha_default", RetrievalParams{}.alpha},
                {"metadata", index.metadata},
                {"records_hash", content_hash(records)},
                {"postings_hash", content_hash(postings)}};

  write_text(directory / "records.jsonl", records);
  write_text(directory / "postings.txt", postings);
  write_text(directory / "norms.txt", norms);
  // Written last so a partially written directory never looks complete.
  write_text(directory / "manifest.json", dump_json(manifest, true) + "\n");
}

Index load_index(const fs::path& directory) {
  const fs::path manifest_file = directory / "manifest.json";
  if (!fs::exists(manifest_file)) {
    throw Error(ErrorCode::kFormatVersionMismatch, "no manifest.json in " + directory.string());
  }
  Json manifest;
  try {
    manifest = Json::parse(read_or_throw(manifest_file));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kFormatVersionMismatch, std::string("unreadable manifest: ") + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("format_version") ||
      manifest["format_version"] != kIndexFormatVersion) {
    throw Error(ErrorCode::kFormatVersionMismatch,
                "unsupported index format in " + directory.string());
  }

  Index index;
  try {
    if (manifest.contains("metadata")) {
      index.metadata = manifest["metadata"].get<std::map<std::string, std::string>>();
    }
    for_each_line(read_or_throw(directory / "records.jsonl"), [&](std::string_view line, std::size_t) {
      const Json json = Json::parse(line);
      CaptionRecord r;
      r.id = json.at("id").get<std::string>();
      r.caption = json.at("caption").get<std::string>();
      if (json.contains("image_uri")) r.image_uri = json["image_uri"].get<std::string>();
      r.parse = parse_from_json(json.at("parse"));
      const std::string id = r.id;
      if (!index.records.emplace(id, std::move(r)).second) {
        throw Error(ErrorCode::kIoError, "duplicate record " + id);
      }
    });
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kIoError, std::string("bad records.jsonl: ") + e.what());
  }

  for_each_line(read_or_throw(directory / "postings.txt"), [&](std::string_view line, std::size_t n) {
    const auto fields = split_tabs(line);
    if (fields.size() % 2 == 0) {
      throw Error(ErrorCode::kIoError, "bad postings line " + std::to_string(n));
    }
    auto& list = index.postings[unescape_field(fields[0])];
    for (std::size_t i = 1; i < fields.size(); i += 2) {
      list.push_back({unescape_field(fields[i]), parse_number<std::uint32_t>(fields[i + 1], "postings.txt")});
    }
  });
  for_each_line(read_or_throw(directory / "norms.txt"), [&](std::string_view line, std::size_t n) {
    const auto fields = split_tabs(line);
    if (fields.size() != 2) throw Error(ErrorCode::kIoError, "bad norms line " + std::to_string(n));
    index.norms[unescape_field(fields[0])] = parse_double(fields[1], "norms.txt");
  });

  if (manifest.value("documents", index.doc_count()) != index.doc_count()) {
    throw Error(ErrorCode::kIoError, "record count disagrees with manifest");
  }
  for (const auto& [term, list] : index.postings) {
    for (const auto& p : list) {
      if (index.records.count(p.id) == 0) {
        throw Error(ErrorCode::kIoError, "posting for unknown id " + p.id);
      }
    }
  }
  return index;
}

std::string content_hash(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::shared_ptr<const Index> IndexStore::snapshot() const {
  std::lock_guard lock(mutex_);
  return current_;
}

void IndexStore::publish(Index index) {
  auto next = std::make_shared<const Index>(std::move(index));
  std::lock_guard lock(mutex_);
  current_ = std::move(next);
}

bool IndexStore::loaded() const {
  std::lock_guard lock(mutex_);
  return current_ != nullptr;
}

}  // namespace anvil
