#include <random>

#include "anvil/matcher.hpp"
#include "doctest.h"
#include "goldens.hpp"
#include "support.hpp"

using namespace anvil;
using anvil::test::parse;

namespace {

MatchResult run(std::string_view query, std::string_view caption,
                const RuleSet& rules = test::example_rules(), const SimilarityProvider& sim = {}) {
  return match_phrases(parse(query), parse(caption), rules, sim);
}

std::vector<std::pair<std::string, std::string>> negation_suite() {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string text = read_file(test::data_path("tests/negation.tsv"));
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const auto a = line.find('\t'), b = line.find('\t', a + 1);
    out.emplace_back(line.substr(0, a), line.substr(a + 1, b - a - 1));
    out.emplace_back(line.substr(0, a), line.substr(b + 1));
  }
  return out;
}

}  // namespace

TEST_SUITE("matcher") {
  TEST_CASE("worked tables") {
    for (const auto& g : test::trace_goldens()) {
      const MatchResult m = run(g.query, g.caption);
      INFO(g.query << " + " << g.caption);
      REQUIRE(m.rows.size() == g.rows.size());
      for (std::size_t i = 0; i < g.rows.size(); ++i) {
        CHECK(m.rows[i].query_word == g.rows[i].query_word);
        CHECK(m.rows[i].group == g.rows[i].group);
        CHECK(m.rows[i].comparison == g.rows[i].comparison);
        CHECK(m.rows[i].score == doctest::Approx(g.rows[i].score));
        CHECK(m.rows[i].weight == doctest::Approx(g.rows[i].weight));
      }
      CHECK(m.overall == doctest::Approx(g.overall).epsilon(0.001));
    }
  }

  TEST_CASE("negated trace rendering") {
    CHECK(render_trace(run("yellow car", "car which is not yellow")) ==
          "Query word  Rule group  Comparison               Score              Weight\n"
          "car         head_rule   head = head              1.0                1.0\n"
          "yellow      mod_rule    mod[] = vhead:cop:rel[]  1.0 (initially)    0.7\n"
          "(none)      mod_rule    'not' = amod[]           0.0                0.0\n"
          "yellow      mod_rule    mod[] = vhead:cop:rel[]  0.0 (on up-score)  0.7\n"
          "overall = 0.588\n");
    const MatchResult m = run("yellow car", "car which is not yellow");
    CHECK(m.rows[1].initial_score == 1.0);
    CHECK(m.rows[1].up_score == 0.0);
  }

  TEST_CASE("identity trace rendering") {
    CHECK(render_trace(run("yellow car", "yellow car")) ==
          "Query word  Rule group  Comparison     Score  Weight\n"
          "car         head_rule   head = head    1.0    1.0\n"
          "yellow      mod_rule    mod[] = mod[]  1.0    0.7\n"
          "overall = 1\n");
  }

  TEST_CASE("empty result renders header and zero") {
    CHECK(render_trace(MatchResult{}) == "Query word  Rule group  Comparison  Score  Weight\noverall = 0\n");
  }

  TEST_CASE("score formatting") {
    CHECK(format_overall(1.0) == "1");
    CHECK(format_overall(1.0 / 1.7) == "0.588");
    CHECK(format_overall(0.0) == "0");
    CHECK(format_overall(0.5) == "0.5");
    CHECK(format_score(1.0) == "1.0");
    CHECK(format_score(0.7) == "0.7");
    CHECK(format_score(1.0 / 3.0) == "0.333");
  }

  TEST_CASE("identity over the sample corpus") {
    for (const auto& c : test::corpus("corpus/sample_captions.jsonl")) {
      const auto p = parse(c.caption);
      CHECK_MESSAGE(match_phrases(p, p, test::shipped_rules()).overall == doctest::Approx(1.0).epsilon(1e-9),
                    c.caption);
    }
  }

  TEST_CASE("bounds and determinism on random pairs") {
    const auto captions = test::corpus("corpus/sample_captions.jsonl");
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, captions.size() - 1);
    for (int i = 0; i < 300; ++i) {
      const auto q = parse(captions[pick(rng)].caption);
      const auto c = parse(captions[pick(rng)].caption);
      for (const RuleSet* rules : {&test::example_rules(), &test::shipped_rules()}) {
        const MatchResult m = match_phrases(q, c, *rules);
        CHECK(m.overall >= 0.0);
        CHECK(m.overall <= 1.0);
        for (const auto& row : m.rows) {
          CHECK(row.score >= 0.0);
          CHECK(row.score <= 1.0);
          CHECK(row.weight >= 0.0);
          CHECK(row.weight <= 1.0);
        }
        CHECK(m == match_phrases(q, c, *rules));
      }
    }
  }

  TEST_CASE("each query word gets at most one row") {
    const auto captions = test::corpus("corpus/sample_captions.jsonl");
    for (std::size_t i = 0; i + 1 < captions.size(); ++i) {
      const MatchResult m = match_phrases(parse(captions[i].caption), parse(captions[i + 1].caption),
                                          test::shipped_rules());
      std::vector<std::size_t> seen;
      for (const auto& row : m.rows) {
        if (!row.query_pos) continue;
        CHECK(std::count(seen.begin(), seen.end(), *row.query_pos) == 0);
        seen.push_back(*row.query_pos);
      }
    }
  }

  TEST_CASE("negation strictly lowers the score") {
    const auto suite = negation_suite();
    REQUIRE(suite.size() == 40);
    for (std::size_t i = 0; i < suite.size(); i += 2) {
      const auto& [query, plain] = suite[i];
      const auto& negated = suite[i + 1].second;
      const double before = run(query, plain, test::shipped_rules()).overall;
      const double after = run(query, negated, test::shipped_rules()).overall;
      CHECK_MESSAGE(after < before, query << " | " << negated);
    }
    // One modifier: (1 * 1 + 0 * 0.7) / 1.7.
    CHECK(run("yellow car", "not yellow car", test::shipped_rules()).overall ==
          doctest::Approx(1.0 / 1.7).epsilon(1e-12));
  }

  TEST_CASE("rule order is semantics") {
    // The query head "lens" can be consumed either by the caption head or by
    // the caption modifier depending on which start rule comes first.
    const RuleSet head_first = parse_rules(
        "start { head = head 1.0 => Done 1.0; head = mod[] 0.5 => Done 1.0; }");
    const RuleSet mod_first = parse_rules(
        "start { head = mod[] 0.5 => Done 1.0; head = head 1.0 => Done 1.0; }");
    const auto q = parse("lens");
    const auto c = parse("lens with a lens cap");
    const MatchResult a = match_phrases(q, c, head_first);
    const MatchResult b = match_phrases(q, c, mod_first);
    REQUIRE(a.rows.size() == 1);
    REQUIRE(b.rows.size() == 1);
    CHECK(*a.rows[0].caption_pos != *b.rows[0].caption_pos);
    CHECK(a.overall == 1.0);
    CHECK(b.overall == 0.5);
  }

  TEST_CASE("up-scores deep in the chain change exactly one row") {
    const MatchResult plain = run("camera with an old lens", "camera with an old lens", test::shipped_rules());
    const MatchResult negated =
        run("camera with an old lens", "camera with a not old lens", test::shipped_rules());
    std::vector<std::string> changed;
    for (const auto& row : negated.rows) {
      if (!row.query_pos) continue;
      const auto same = std::find_if(plain.rows.begin(), plain.rows.end(),
                                     [&](const WordMatch& r) { return r.query_pos == row.query_pos; });
      REQUIRE(same != plain.rows.end());
      if (same->score != row.score) changed.push_back(row.query_word);
    }
    CHECK(changed == std::vector<std::string>{"old"});
  }

  TEST_CASE("mopping up and unmatched words") {
    // "large" has no counterpart: mopped up at 0.3 with the start weight.
    const MatchResult mop = run("large camera", "camera");
    const auto large = std::find_if(mop.rows.begin(), mop.rows.end(),
                                    [](const WordMatch& r) { return r.query_word == "large"; });
    REQUIRE(large != mop.rows.end());
    CHECK(large->score == doctest::Approx(0.3));
    CHECK(large->weight == doctest::Approx(1.0));
    CHECK_FALSE(large->caption_pos.has_value());

    // No rule reaches the words at all.
    const MatchResult none = run("camera", "tripod");
    REQUIRE(none.rows.size() == 1);
    CHECK(none.rows[0].unmatched());
    CHECK(none.overall == 0.0);

    MatchOptions light;
    light.unmatched_weight = 0.5;
    const MatchResult weighted =
        match_phrases(parse("camera with a lens"), parse("camera"), test::example_rules(), {}, light);
    for (const auto& row : weighted.rows) {
      if (row.unmatched()) CHECK(row.weight == 0.5);
    }
  }

  TEST_CASE("synonyms reduce the score") {
    SimilarityProvider sim;
    sim.add_synonym("car", "vehicle", 0.8);
    CHECK(sim.similarity("vehicle", "car") == 0.8);
    CHECK(sim.similarity("car", "car") == 1.0);
    CHECK_FALSE(sim.similarity("car", "boat").has_value());
    const MatchResult m = run("yellow car", "yellow vehicle", test::example_rules(), sim);
    CHECK(m.rows[0].score == doctest::Approx(0.8));
    CHECK(m.overall == doctest::Approx((0.8 + 0.7) / 1.7));
    CHECK_THROWS(sim.add_synonym("a", "b", 1.5));
    CHECK(SimilarityProvider::parse("# c\ncar\tautomobile\t0.9\n").similarity("automobile", "car") == 0.9);
  }

  TEST_CASE("multiple heads pair by similarity") {
    const MatchResult m = run("box", "old camera, hip flask, box and album");
    REQUIRE(m.rows.size() == 1);
    CHECK(m.rows[0].score == 1.0);
    CHECK(m.rows[0].comparison == "head = head");
  }
}
