#include "cli.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "anvil/error.hpp"
#include "anvil/eval.hpp"
#include "anvil/http_server.hpp"
#include "anvil/json_codec.hpp"
#include "anvil/service.hpp"

namespace anvil::cli {

namespace fs = std::filesystem;

namespace {

struct Config {
  std::string lexicon;
  std::string rules;
  std::string context_rules;
  std::string synonyms;
  double alpha = RetrievalParams{}.alpha;
  std::size_t k_candidates = RetrievalParams{}.k_candidates;
  std::size_t limit = RetrievalParams{}.limit;
  std::string format = "text";
};

std::string default_data(const char* relative) {
  return (fs::path(ANVIL_DEFAULT_DATA_DIR) / relative).string();
}

Lexicon load_lexicon(const Config& config) {
  std::string path = config.lexicon;
  if (path.empty()) {
    const char* env = std::getenv("ANVIL_LEXICON");
    path = env && *env ? env : default_data("lexicon/anvil.tsv");
  }
  return Lexicon::load(path);
}

Resources load_resources(const Config& config) {
  Resources r;
  r.lexicon = load_lexicon(config);
  r.rules = parse_rules(read_file(config.rules));
  r.context_rules = parse_context_rules(read_file(config.context_rules));
  if (!config.synonyms.empty()) r.similarity = SimilarityProvider::parse(read_file(config.synonyms));
  return r;
}

RetrievalParams params_of(const Config& config) {
  return {config.k_candidates, config.limit, config.alpha};
}

Json params_json(const Config& config) {
  return Json{{"alpha", config.alpha}, {"k_candidates", config.k_candidates}, {"limit", config.limit}};
}

bool colour_enabled(const std::ostream& out) {
  return &out == &std::cout && std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO) != 0;
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

}  // namespace

std::string render_results(const std::string& query, const std::vector<QueryResult>& results) {
  std::string out = "Query = '" + query + "'\n";
  out += std::to_string(results.size()) + (results.size() == 1 ? " result:\n" : " results:\n");
  std::vector<std::string> scores;
  std::size_t width = 5;  // "SCORE"
  for (const auto& r : results) {
    scores.push_back(format_overall(r.combined_score));
    width = std::max(width, scores.back().size());
  }
  width += 2;
  out += pad("SCORE", width) + "CAPTION\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    out += pad(scores[i], width) + results[i].caption + "\n";
    // Contexts gathered per anchor word, anchors in order of first appearance.
    std::vector<std::pair<std::string, std::vector<std::string>>> lines;
    std::map<std::size_t, std::size_t> slot;
    for (const auto& c : results[i].contexts) {
      auto [it, fresh] = slot.emplace(c.anchor_pos, lines.size());
      if (fresh) lines.push_back({c.anchor_surface, {}});
      lines[it->second].second.push_back(c.context_text);
    }
    std::size_t label = 0;
    for (const auto& [anchor, texts] : lines) label = std::max(label, anchor.size() + 1);
    for (const auto& [anchor, texts] : lines) {
      std::string joined;
      for (const auto& t : texts) joined += (joined.empty() ? "" : ", ") + t;
      out += std::string(width, ' ') + "* " + pad(anchor + ":", label) + " " + joined + "\n";
    }
  }
  return out;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Config config;
  config.rules = default_data("rules/anvil.mr");
  config.context_rules = default_data("rules/contexts.cr");

  CLI::App app{"Caption retrieval by phrase matching over dependency structures", "anvil"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--lexicon", config.lexicon, "Lexicon TSV (default: $ANVIL_LEXICON or the bundled one)")
      ->check(CLI::ExistingFile);
  app.add_option("--rules", config.rules, "Match rule file (.mr)")->check(CLI::ExistingFile)
      ->capture_default_str();
  app.add_option("--context-rules", config.context_rules, "Context rule file (.cr)")
      ->check(CLI::ExistingFile)->capture_default_str();
  app.add_option("--synonyms", config.synonyms, "Similarity TSV: word, word, score")
      ->check(CLI::ExistingFile);
  app.add_option("--alpha", config.alpha, "Weight of the phrase score")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app.add_option("--k-candidates", config.k_candidates, "Candidates rescored by phrase matching")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--limit", config.limit, "Results returned")->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", config.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  std::string text, caption_text, captions_file, out_dir, index_dir, queries_file, qrels_file;
  std::string host = "127.0.0.1";
  int port = 8080;

  auto* parse = app.add_subcommand("parse", "Print the dependency structure of a phrase");
  parse->add_option("text", text, "Phrase")->required();

  auto* match = app.add_subcommand("match", "Print the matching trace of a query against a caption");
  match->add_option("query", text, "Query phrase")->required();
  match->add_option("caption", caption_text, "Caption phrase")->required();

  auto* index = app.add_subcommand("index", "Analyse a JSON Lines corpus and write an index");
  index->add_option("--captions", captions_file, "Corpus, one JSON object per line")
      ->required()->check(CLI::ExistingFile);
  index->add_option("--out", out_dir, "Index directory")->required();

  auto* query = app.add_subcommand("query", "Rank the indexed captions for a query");
  query->add_option("--index", index_dir, "Index directory")->required()->check(CLI::ExistingDirectory);
  query->add_option("text", text, "Query")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a query set against relevance judgements");
  eval->add_option("--index", index_dir, "Index directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--queries", queries_file, "TSV: query_id, text")->required()->check(CLI::ExistingFile);
  eval->add_option("--qrels", qrels_file, "TSV: query_id, caption_id, 0|1")
      ->required()->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "Serve the HTTP/JSON query API");
  serve->add_option("--index", index_dir, "Index directory")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--port", port, "TCP port (0 picks a free one)")->required()->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Interface to bind")->capture_default_str();

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const bool json = config.format == "json";
  try {
    if (parse->parsed()) {
      const ParseOutput p = analyze(text, load_lexicon(config));
      out << (json ? dump_json(parse_to_json(p), true) + "\n" : render_structure(p.structure, p.tokens));
    } else if (match->parsed()) {
      const Lexicon lexicon = load_lexicon(config);
      const Resources r = [&] {
        Resources res;
        res.rules = parse_rules(read_file(config.rules));
        if (!config.synonyms.empty()) res.similarity = SimilarityProvider::parse(read_file(config.synonyms));
        return res;
      }();
      const MatchResult m = match_phrases(analyze(text, lexicon), analyze(caption_text, lexicon), r.rules,
                                          r.similarity, r.match_options);
      out << (json ? dump_json(match_to_json(m), true) + "\n" : render_trace(m));
    } else if (index->parsed()) {
      const Lexicon lexicon = load_lexicon(config);
      Index built = build_index(load_corpus(captions_file), lexicon);
      built.metadata["rules_hash"] = content_hash(read_file(config.rules));
      built.metadata["context_rules_hash"] = content_hash(read_file(config.context_rules));
      save_index(built, out_dir);
      if (json) {
        out << dump_json(Json{{"documents", built.doc_count()},
                              {"terms", built.postings.size()},
                              {"out", out_dir}},
                         true)
            << "\n";
      } else {
        out << "indexed " << built.doc_count() << " captions (" << built.postings.size()
            << " terms) into " << out_dir << "\n";
      }
    } else if (query->parsed()) {
      const Resources resources = load_resources(config);
      const Index loaded = load_index(index_dir);
      if (json) {
        QueryRequest request;
        request.query = text;
        request.limit = config.limit;
        const QueryResponse response = answer_query(loaded, resources, params_of(config), request);
        Json body = Json::parse(response_body(response));
        body["query"] = text;
        body["params"] = params_json(config);
        out << dump_json(body, true) << "\n";
      } else {
        const auto results = retrieve(loaded, text, resources, params_of(config));
        std::string listing = render_results(text, results);
        if (colour_enabled(out)) {
          const auto header = listing.find("SCORE");
          listing.insert(listing.find('\n', header), "\x1b[0m");
          listing.insert(header, "\x1b[1m");
        }
        out << listing;
      }
    } else if (eval->parsed()) {
      const Resources resources = load_resources(config);
      const Index loaded = load_index(index_dir);
      const EvalReport report = run_eval(loaded, resources, parse_queries(read_file(queries_file)),
                                         parse_qrels(read_file(qrels_file)), params_of(config));
      out << (json ? report_json(report) : report_table(report));
    } else if (serve->parsed()) {
      auto resources = std::make_shared<const Resources>(load_resources(config));
      auto store = std::make_shared<IndexStore>();
      QueryService service(store, resources, params_of(config));
      HttpServer server(service);
      const int bound = server.bind(host, port);
      if (bound < 0) {
        err << "error: cannot bind " << host << ":" << port << "\n";
        return kDataError;
      }
      store->publish(load_index(index_dir));
      err << "listening on http://" << host << ":" << bound << "\n";
      return server.listen() ? kOk : kDataError;
    }
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}

}  // namespace anvil::cli
