#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "anvil/index.hpp"
#include "anvil/matcher.hpp"

namespace {

using namespace anvil;

std::string data(const char* relative) { return (std::filesystem::path(ANVIL_DATA_DIR) / relative).string(); }

const Resources& resources() {
  static const Resources r = [] {
    Resources out;
    out.lexicon = Lexicon::load(data("lexicon/anvil.tsv"));
    out.rules = parse_rules(read_file(data("rules/anvil.mr")));
    out.context_rules = parse_context_rules(read_file(data("rules/contexts.cr")));
    return out;
  }();
  return r;
}

std::string synthetic(std::mt19937& rng, std::size_t words) {
  static const std::vector<std::string> adj = {"black", "old", "large", "red", "wooden", "white"};
  static const std::vector<std::string> noun = {"camera", "table", "lens", "house", "boat", "car", "tree", "dog"};
  static const std::vector<std::string> prep = {"on", "with", "near", "under"};
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  std::string out = pick(adj) + " " + pick(noun);
  for (std::size_t n = 2; n + 3 <= words; n += 3) out += " " + pick(prep) + " a " + pick(noun);
  return out;
}

std::vector<CaptionInput> corpus(std::size_t n) {
  std::mt19937 rng(7);
  std::vector<CaptionInput> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"c" + std::to_string(i), synthetic(rng, 2 + i % 20), {}});
  return out;
}

void BM_Analyze(benchmark::State& state) {
  std::mt19937 rng(1);
  const std::string text = synthetic(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analyze(text, resources().lexicon));
}
BENCHMARK(BM_Analyze)->Arg(5)->Arg(11)->Arg(22);

void BM_Match(benchmark::State& state) {
  const auto q = analyze("old camera with a lens", resources().lexicon);
  const auto c = analyze("black camera with a zoom lens on a white table", resources().lexicon);
  for (auto _ : state) benchmark::DoNotOptimize(match_phrases(q, c, resources().rules));
}
BENCHMARK(BM_Match);

void BM_BuildIndex(benchmark::State& state) {
  const auto input = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_index(input, resources().lexicon));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Retrieve(benchmark::State& state) {
  const Index index = build_index(corpus(2000), resources().lexicon);
  RetrievalParams params;
  params.k_candidates = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(retrieve(index, "old camera on a table", resources(), params));
}
BENCHMARK(BM_Retrieve)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
