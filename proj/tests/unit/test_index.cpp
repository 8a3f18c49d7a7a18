#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include "anvil/error.hpp"
#include "anvil/index.hpp"
#include "anvil/json_codec.hpp"
#include "doctest.h"
#include "goldens.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace anvil;

namespace {

const Index& figure_index() {
  static const Index index = build_index(test::corpus("corpus/figure_results.jsonl"), test::lexicon());
  return index;
}

const Index& sample_index() {
  static const Index index = build_index(test::corpus("corpus/sample_captions.jsonl"), test::lexicon());
  return index;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no anvil::Error raised");
  return ErrorCode::kEmptyInput;
}

}  // namespace

TEST_SUITE("index-store") {
  TEST_CASE("postings") {
    const Index index = build_index(test::corpus("corpus/figure_contexts.jsonl"), test::lexicon());
    CHECK(index.doc_count() == 5);
    REQUIRE(index.postings.count("camera") == 1);
    CHECK(index.postings.at("camera").size() == 5);
    CHECK(index.postings.at("lens").size() == 5);
    CHECK(index.postings.at("table") == std::vector<Posting>{{"ctx-3", 1}, {"ctx-5", 1}});
    CHECK(index.postings.count("a") == 0);
    CHECK(index.postings.count("with") == 0);
    CHECK(index.idf("camera") == doctest::Approx(std::log(2.0)));
    CHECK(index.idf("table") == doctest::Approx(std::log(1.0 + 5.0 / 2.0)));
    CHECK(index.idf("absent") == 0.0);
  }

  TEST_CASE("postings agree with the records") {
    const Index& index = sample_index();
    std::map<std::string, std::map<std::string, std::uint32_t>> expected;
    for (const auto& [id, record] : index.records) {
      for (const auto& t : index_terms(record.parse)) ++expected[t][id];
    }
    REQUIRE(expected.size() == index.postings.size());
    for (const auto& [term, postings] : index.postings) {
      CHECK(std::is_sorted(postings.begin(), postings.end(),
                           [](const Posting& a, const Posting& b) { return a.id < b.id; }));
      for (const auto& p : postings) CHECK(expected[term][p.id] == p.tf);
      CHECK(postings.size() == expected[term].size());
    }
  }

  TEST_CASE("corpus errors") {
    CHECK(code_of([] {
            build_index({{"a", "red car"}, {"a", "blue car"}}, test::lexicon());
          }) == ErrorCode::kDuplicateId);
    CHECK(code_of([] { build_index({{"a", "   "}}, test::lexicon()); }) == ErrorCode::kEmptyCaption);
    CHECK(code_of([] { build_index({{"a", "..."}}, test::lexicon()); }) == ErrorCode::kEmptyCaption);
    CHECK(code_of([] {
            add_records(figure_index(), {{"fig-1", "red car"}}, test::lexicon());
          }) == ErrorCode::kDuplicateId);
    try {
      parse_corpus("{\"id\": \"a\", \"caption\": \"x\"}\nnot json\n");
      FAIL("accepted a bad line");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_corpus("{\"caption\": \"x\"}\n"), SyntaxError);
    CHECK(code_of([] { load_corpus("/nonexistent/corpus.jsonl"); }) == ErrorCode::kIoError);
    const auto parsed = parse_corpus("{\"id\": \"a\", \"caption\": \"x\", \"image_uri\": \"u\"}\n\n");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].image_uri == "u");
  }

  TEST_CASE("simple matching") {
    const Index index = build_index({{"a", "red car"}, {"b", "car red"}, {"c", "blue boat"}}, test::lexicon());
    const auto hits = simple_match(index, {"red", "car"}, 10);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].second == doctest::Approx(1.0));
    CHECK(hits[1].second == doctest::Approx(1.0));
    CHECK(hits[0].first == "a");
    CHECK(simple_match(index, {"tree"}, 10).empty());
    CHECK(simple_match(index, {"red", "car"}, 1).size() == 1);
    CHECK(code_of([&] { simple_match(index, {}, 10); }) == ErrorCode::kEmptyQuery);
  }

  TEST_CASE("simple matching against a naive cosine") {
    std::mt19937 rng(5);
    std::vector<CaptionInput> corpus;
    for (int i = 0; i < 80; ++i) {
      char id[8];
      std::snprintf(id, sizeof id, "t%02d", i);
      corpus.push_back({id, test::synthetic_caption(rng, 3 + i % 9)});
    }
    const Index index = build_index(corpus, test::lexicon());
    std::map<std::string, std::vector<std::string>> docs;
    for (const auto& [id, r] : index.records) docs[id] = index_terms(r.parse);
    for (int q = 0; q < 40; ++q) {
      const auto terms = index_terms(test::parse(test::synthetic_caption(rng, 2 + q % 5)));
      const auto got = simple_match(index, terms, 1000);
      const auto want = test::cosine_oracle(docs, terms);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].second == doctest::Approx(want[i].second).epsilon(1e-9));
        // Ties may order differently only when the scores agree.
        if (got[i].first != want[i].first) CHECK(std::abs(got[i].second - want[i].second) < 1e-9);
      }
    }
  }

  TEST_CASE("pipeline order on the figure corpus") {
    RetrievalParams params;
    params.alpha = 1.0;
    const auto results = retrieve(figure_index(), "camera with a lens.", test::shipped_resources(), params);
    const auto& golden = test::pipeline_golden();
    REQUIRE(results.size() == golden.size());
    for (std::size_t i = 0; i < golden.size(); ++i) {
      CHECK(results[i].id == golden[i].first);
      CHECK(format_overall(results[i].combined_score) == format_overall(golden[i].second));
    }
  }

  TEST_CASE("combination and limits") {
    const auto resources = test::shipped_resources();
    RetrievalParams params;
    const auto results = retrieve(figure_index(), "camera with a lens.", resources, params);
    for (const auto& r : results) {
      CHECK(r.combined_score == doctest::Approx(0.8 * r.phrase_score + 0.2 * r.simple_score));
      CHECK(r.combined_score >= 0.0);
      CHECK(r.combined_score <= 1.0);
    }
    params.limit = 2;
    CHECK(retrieve(figure_index(), "camera with a lens.", resources, params).size() == 2);

    // alpha = 0 ranks exactly like simple matching.
    params.alpha = 0.0;
    params.limit = 100;
    const auto simple = retrieve(sample_index(), "old camera on a table", resources, params);
    const auto raw = simple_match(sample_index(), index_terms(test::parse("old camera on a table")), 100);
    REQUIRE(simple.size() == raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      CHECK(simple[i].id == raw[i].first);
      CHECK(simple[i].combined_score == doctest::Approx(raw[i].second));
    }
  }

  TEST_CASE("every caption retrieves itself first") {
    const auto resources = test::shipped_resources();
    for (const auto& [id, record] : sample_index().records) {
      const auto results = retrieve(sample_index(), record.caption, resources, {});
      REQUIRE(!results.empty());
      CHECK(results[0].combined_score == doctest::Approx(1.0));
      // Exact duplicates may share the top score; the caption must be among them.
      bool found = false;
      for (const auto& r : results) found |= r.id == id && r.combined_score == results[0].combined_score;
      CHECK_MESSAGE(found, id);
    }
  }

  TEST_CASE("query errors") {
    const auto resources = test::shipped_resources();
    CHECK(retrieve(figure_index(), "zeppelin", resources, {}).empty());
    CHECK(code_of([&] { retrieve(figure_index(), "   ", resources, {}); }) == ErrorCode::kEmptyQuery);
    CHECK(code_of([&] { retrieve(Index{}, "camera", resources, {}); }) == ErrorCode::kIndexEmpty);
  }

  TEST_CASE("save and load") {
    test::TempDir dir("index");
    Index index = sample_index();
    index.metadata["note"] = "tab\there";
    save_index(index, dir.path());
    for (const char* f : {"manifest.json", "records.jsonl", "postings.txt", "norms.txt"}) {
      CHECK(std::filesystem::exists(dir.path() / f));
    }
    const Index loaded = load_index(dir.path());
    CHECK(loaded == index);

    const auto resources = test::shipped_resources();
    for (const char* q : {"camera with a lens", "dog on a beach", "old red car"}) {
      CHECK(retrieve(loaded, q, resources, {}) == retrieve(index, q, resources, {}));
    }
  }

  TEST_CASE("incremental add equals rebuild") {
    auto corpus = test::corpus("corpus/sample_captions.jsonl");
    const std::vector<CaptionInput> head(corpus.begin(), corpus.begin() + 40);
    const std::vector<CaptionInput> tail(corpus.begin() + 40, corpus.end());
    const Index grown = add_records(build_index(head, test::lexicon()), tail, test::lexicon());
    const Index& full = sample_index();
    CHECK(grown.records == full.records);
    CHECK(grown.postings == full.postings);
    for (const auto& [id, n] : full.norms) CHECK(grown.norms.at(id) == doctest::Approx(n).epsilon(1e-12));

    test::TempDir dir("grown");
    save_index(grown, dir.path());
    CHECK(load_index(dir.path()) == grown);
  }

  TEST_CASE("broken index directories") {
    test::TempDir dir("broken");
    CHECK(code_of([&] { load_index(dir.path()); }) == ErrorCode::kFormatVersionMismatch);
    save_index(figure_index(), dir.path());

    const auto manifest = dir.path() / "manifest.json";
    Json m = Json::parse(read_file(manifest.string()));
    m["format_version"] = kIndexFormatVersion + 1;
    std::ofstream(manifest) << m.dump();
    CHECK(code_of([&] { load_index(dir.path()); }) == ErrorCode::kFormatVersionMismatch);

    save_index(figure_index(), dir.path());
    std::ofstream(dir.path() / "postings.txt", std::ios::app) << "camera\tghost\t1\n";
    CHECK(code_of([&] { load_index(dir.path()); }) == ErrorCode::kIoError);

    save_index(figure_index(), dir.path());
    std::filesystem::remove(dir.path() / "norms.txt");
    CHECK(code_of([&] { load_index(dir.path()); }) == ErrorCode::kIoError);
  }

  TEST_CASE("content hash") {
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("a") == "af63dc4c8601ec8c");
  }

  TEST_CASE("store snapshots survive replacement") {
    IndexStore store;
    CHECK_FALSE(store.loaded());
    CHECK(store.snapshot() == nullptr);
    store.publish(figure_index());
    const auto before = store.snapshot();
    std::thread writer([&] { store.publish(sample_index()); });
    writer.join();
    CHECK(before->doc_count() == 5);
    CHECK(store.snapshot()->doc_count() == sample_index().doc_count());
  }
}
