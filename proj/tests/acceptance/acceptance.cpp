// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "anvil/context.hpp"
#include "anvil/eval.hpp"
#include "anvil/index.hpp"
#include "anvil/matcher.hpp"
#include "anvil/service.hpp"
#include "goldens.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace anvil;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome trace_fidelity() {
  std::vector<std::pair<ParseOutput, ParseOutput>> inputs;
  for (const auto& g : test::trace_goldens()) inputs.emplace_back(test::parse(g.query), test::parse(g.caption));
  const auto start = Clock::now();
  std::vector<MatchResult> results;
  for (const auto& [q, c] : inputs) results.push_back(match_phrases(q, c, test::example_rules()));
  const double elapsed = ms_since(start);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& g = test::trace_goldens()[i];
    const auto& m = results[i];
    if (m.rows.size() != g.rows.size()) return {false, g.caption + ": row count"};
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
      const auto& got = m.rows[r];
      const auto& want = g.rows[r];
      if (got.query_word != want.query_word || got.group != want.group || got.comparison != want.comparison ||
          std::abs(got.score - want.score) > 1e-9 || std::abs(got.weight - want.weight) > 1e-9) {
        return {false, g.caption + ": row " + std::to_string(r)};
      }
    }
    if (std::abs(m.overall - g.overall) > 0.001) return {false, g.caption + ": overall " + format_overall(m.overall)};
  }
  return {elapsed < 10.0, "3 tables, " + std::to_string(elapsed) + " ms"};
}

Outcome parse_goldens() {
  std::size_t ok = 0;
  for (const auto& g : test::listing_goldens()) ok += test::listing(g.phrase) == g.listing ? 1 : 0;
  return {ok == test::listing_goldens().size(),
          std::to_string(ok) + "/" + std::to_string(test::listing_goldens().size()) + " listings identical"};
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::multiset<std::string> lowered(const std::vector<std::string>& texts) {
  std::multiset<std::string> out;
  for (const auto& t : texts) out.insert(lower(t));
  return out;
}

Outcome context_goldens() {
  const auto query = test::parse("camera with a lens");
  std::vector<CaptionContexts> all;
  for (const auto& g : test::context_goldens()) {
    const ParseOutput c = test::parse(g.caption);
    const auto pairs =
        extract_contexts(match_phrases(query, c, test::shipped_rules()), c, test::shipped_context_rules());
    std::multiset<std::string> got;
    for (const auto& p : pairs) got.insert(lower(render_context(p, test::shipped_context_rules())));
    if (got != lowered(g.contexts)) return {false, g.id};
    all.push_back({g.id, pairs});
  }
  const auto groups = group_by_context(all, "camera");
  for (const auto& [key, count] : test::grouping_goldens()) {
    const auto it = std::find_if(groups.begin(), groups.end(), [&](const ContextGroup& g) {
      return g.anchor_lemma == key.first && g.context_text == key.second;
    });
    if (it == groups.end() || it->count != count) return {false, "group " + key.first + "/" + key.second};
  }
  return {true, "5 captions, 4 groups"};
}

Outcome pipeline_golden() {
  const Index index = build_index(test::corpus("corpus/figure_results.jsonl"), test::lexicon());
  RetrievalParams params;
  params.alpha = 1.0;
  const auto results = retrieve(index, "camera with a lens.", test::shipped_resources(), params);
  const auto& golden = test::pipeline_golden();
  if (results.size() != golden.size()) return {false, std::to_string(results.size()) + " results"};
  std::string scores;
  for (std::size_t i = 0; i < golden.size(); ++i) {
    if (results[i].id != golden[i].first) return {false, "rank " + std::to_string(i + 1) + " is " + results[i].id};
    scores += (i ? " " : "") + format_overall(results[i].combined_score);
  }
  const bool top = std::abs(results[0].combined_score - 1.0) < 1e-9 && std::abs(results[1].combined_score - 1.0) < 1e-9;
  const bool third = std::abs(results[2].combined_score - 0.588) <= 0.01;
  return {top && third, scores};
}

Outcome identity() {
  const auto captions = test::corpus("corpus/sample_captions.jsonl");
  double worst = 0.0;
  for (const auto& c : captions) {
    const auto p = test::parse(c.caption);
    worst = std::max(worst, std::abs(match_phrases(p, p, test::shipped_rules()).overall - 1.0));
  }
  return {captions.size() >= 50 && worst < 1e-9,
          std::to_string(captions.size()) + " captions, max error " + std::to_string(worst)};
}

Outcome negation() {
  std::istringstream in(read_file(test::data_path("tests/negation.tsv")));
  std::string line;
  std::size_t pairs = 0, decreased = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto a = line.find('\t'), b = line.find('\t', a + 1);
    const auto q = test::parse(line.substr(0, a));
    const double plain = match_phrases(q, test::parse(line.substr(a + 1, b - a - 1)), test::shipped_rules()).overall;
    const double negated = match_phrases(q, test::parse(line.substr(b + 1)), test::shipped_rules()).overall;
    ++pairs;
    decreased += negated < plain ? 1 : 0;
  }
  return {pairs == 20 && decreased == pairs, std::to_string(decreased) + "/" + std::to_string(pairs) + " decrease"};
}

Outcome metric_oracle() {
  std::mt19937 rng(20240607);
  std::vector<std::string> pool;
  for (int i = 0; i < 30; ++i) pool.push_back("d" + std::to_string(i));
  const auto start = Clock::now();
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t length = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
    const std::vector<std::string> ranking(pool.begin(), pool.begin() + length);
    auto shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const std::set<std::string> relevant(shuffled.begin(), shuffled.begin() + r);
    const QueryMetrics got = metrics(ranking, relevant);
    const QueryMetrics want = test::metrics_oracle(ranking, relevant);
    if (got.curve != want.curve || got.p_at_10pct_recall != want.p_at_10pct_recall || got.p_at_5 != want.p_at_5 ||
        got.r_precision != want.r_precision) {
      ++mismatches;
    }
  }
  const double elapsed = ms_since(start);
  return {mismatches == 0 && elapsed < 5000.0,
          std::to_string(mismatches) + " mismatches, " + std::to_string(elapsed) + " ms"};
}

Outcome tfidf_oracle() {
  const std::vector<CaptionInput> toy = {
      {"t01", "black camera with a zoom lens"},  {"t02", "red car on a street"},
      {"t03", "old camera on a wooden table"},   {"t04", "dog on a beach"},
      {"t05", "camera lens and camera bag"},     {"t06", "wooden table with a lamp"},
      {"t07", "red boat near a bridge"},         {"t08", "small dog with a red ball"},
      {"t09", "lens cap on a table"},            {"t10", "street lamp near a wall"}};
  const Index index = build_index(toy, test::lexicon());
  std::map<std::string, std::vector<std::string>> docs;
  for (const auto& [id, r] : index.records) docs[id] = index_terms(r.parse);
  for (const char* q : {"camera with a lens", "red dog", "wooden table", "lamp near a street", "camera camera"}) {
    const auto terms = index_terms(test::parse(q));
    const auto got = simple_match(index, terms, 10);
    const auto want = test::cosine_oracle(docs, terms);
    if (got.size() != want.size()) return {false, std::string(q) + ": size"};
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i].first != want[i].first || std::abs(got[i].second - want[i].second) > 1e-12) {
        return {false, std::string(q) + ": rank " + std::to_string(i + 1)};
      }
    }
  }
  return {true, "5 queries over 10 documents"};
}

Outcome scale() {
  std::mt19937 rng(1932);
  std::normal_distribution<double> length(9.0, 4.0);
  std::vector<CaptionInput> corpus;
  std::size_t words = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto n = static_cast<std::size_t>(std::clamp(std::lround(length(rng)), 1L, 22L));
    words += n;
    corpus.push_back({"syn-" + std::to_string(i), test::synthetic_caption(rng, n)});
  }
  auto start = Clock::now();
  const Index index = build_index(corpus, test::lexicon());
  const double build_ms = ms_since(start);

  const Resources resources = test::shipped_resources();
  RetrievalParams params;
  params.k_candidates = 100;
  std::vector<double> latencies;
  for (int q = 0; q < 31; ++q) {
    const std::string text = test::synthetic_caption(rng, 2 + q % 6);
    start = Clock::now();
    retrieve(index, text, resources, params);
    latencies.push_back(ms_since(start));
  }
  std::nth_element(latencies.begin(), latencies.begin() + 15, latencies.end());
  const double median = latencies[15];
  char detail[160];
  std::snprintf(detail, sizeof detail, "2000 captions (mean %.1f words), build %.0f ms, median query %.1f ms",
                static_cast<double>(words) / 2000.0, build_ms, median);
  return {build_ms < 30000.0 && median < 100.0, detail};
}

Outcome determinism() {
  const Resources resources = test::shipped_resources();
  QueryRequest request;
  request.query = "camera with a lens";
  auto run_once = [&](const char* tag) {
    test::TempDir dir(tag);
    save_index(build_index(test::corpus("corpus/sample_captions.jsonl"), test::lexicon()), dir.path());
    return response_body(answer_query(load_index(dir.path()), resources, {}, request));
  };
  const std::string a = run_once("det-a");
  const std::string b = run_once("det-b");
  return {a == b && !a.empty(), std::to_string(a.size()) + " bytes"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"worked-trace fidelity", trace_fidelity}, {"parse goldens", parse_goldens},
      {"context goldens", context_goldens},      {"pipeline golden", pipeline_golden},
      {"identity property", identity},           {"negation property", negation},
      {"metric oracle", metric_oracle},          {"tf-idf oracle", tfidf_oracle},
      {"scale smoke test", scale},               {"determinism", determinism}};
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %s  (%s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
