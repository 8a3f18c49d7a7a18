#include "anvil/json_codec.hpp"

#include "anvil/error.hpp"

namespace anvil {

namespace {

Json phrase_to_json(const PhraseNode& node) {
  Json children = Json::array();
  for (const auto& child : node.children) children.push_back(phrase_to_json(child));
  return Json{{"category", category_name(node.category)},
              {"span", {node.span.start, node.span.end}},
              {"children", std::move(children)}};
}

PhraseNode phrase_from_json(const Json& json) {
  PhraseNode node;
  const auto category = parse_category(json.at("category").get<std::string>());
  if (!category) throw Error(ErrorCode::kIoError, "bad phrase category");
  node.category = *category;
  node.span = {json.at("span").at(0).get<std::size_t>(), json.at("span").at(1).get<std::size_t>()};
  for (const auto& child : json.at("children")) node.children.push_back(phrase_from_json(child));
  return node;
}

std::string_view source_name(TagSource source) {
  switch (source) {
    case TagSource::kLexicon: return "lexicon";
    case TagSource::kSuffix: return "suffix";
    case TagSource::kFallback: return "fallback";
    case TagSource::kUnset: break;
  }
  return "unset";
}

TagSource source_from(std::string_view name) {
  if (name == "lexicon") return TagSource::kLexicon;
  if (name == "suffix") return TagSource::kSuffix;
  if (name == "fallback") return TagSource::kFallback;
  return TagSource::kUnset;
}

}  // namespace

Json parse_to_json(const ParseOutput& parse) {
  Json tokens = Json::array();
  for (const auto& t : parse.tokens) {
    tokens.push_back({t.surface, t.lemma, pos_name(t.pos), source_name(t.source)});
  }
  Json links = Json::object();
  for (Var var : kAllVars) {
    Json entries = Json::array();
    for (const Link& l : parse.structure.links(var)) entries.push_back({l.anchor, l.dependent});
    if (!entries.empty()) links[std::string(var_name(var))] = std::move(entries);
  }
  Json bracketing = Json::array();
  for (const auto& node : parse.bracketing) bracketing.push_back(phrase_to_json(node));
  return Json{{"tokens", std::move(tokens)},
              {"heads", parse.structure.heads()},
              {"links", std::move(links)},
              {"bracketing", std::move(bracketing)},
              {"unattached", parse.unattached}};
}

ParseOutput parse_from_json(const Json& json) {
  ParseOutput parse;
  for (const auto& t : json.at("tokens")) {
    Token token;
    token.surface = t.at(0).get<std::string>();
    token.lemma = t.at(1).get<std::string>();
    const auto pos = parse_pos(t.at(2).get<std::string>());
    if (!pos) throw Error(ErrorCode::kIoError, "bad part of speech in stored parse");
    token.pos = *pos;
    token.source = source_from(t.at(3).get<std::string>());
    token.position = parse.tokens.size();
    parse.tokens.push_back(std::move(token));
  }
  parse.structure = DependencyStructure(parse.tokens.size());
  for (const auto& h : json.at("heads")) parse.structure.add_head(h.get<std::size_t>());
  for (const auto& [name, entries] : json.at("links").items()) {
    const auto var = parse_var(name);
    if (!var) throw Error(ErrorCode::kIoError, "bad variable in stored parse: " + name);
    for (const auto& e : entries) {
      parse.structure.add_link(*var, e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
  }
  for (const auto& node : json.at("bracketing")) parse.bracketing.push_back(phrase_from_json(node));
  parse.unattached = json.at("unattached").get<std::vector<std::size_t>>();
  return parse;
}

Json match_to_json(const MatchResult& match) {
  Json rows = Json::array();
  for (const auto& row : match.rows) {
    Json r{{"query_word", row.query_word},
           {"group", row.group},
           {"comparison", row.comparison},
           {"score", row.score},
           {"initial_score", row.initial_score},
           {"up_score", row.up_score},
           {"weight", row.weight}};
    r["query_pos"] = row.query_pos ? Json(*row.query_pos) : Json(nullptr);
    r["caption_pos"] = row.caption_pos ? Json(*row.caption_pos) : Json(nullptr);
    rows.push_back(std::move(r));
  }
  return Json{{"rows", std::move(rows)},
              {"overall", match.overall},
              {"matched_caption", match.matched_caption}};
}

Json context_to_json(const ContextPair& pair) {
  return Json{{"anchor", pair.anchor_lemma},
              {"text", pair.context_text},
              {"category", pair.category}};
}

Json groups_to_json(const std::vector<ContextGroup>& groups) {
  Json out = Json::array();
  for (const auto& g : groups) {
    out.push_back({{"anchor", g.anchor_lemma},
                   {"context", g.context_text},
                   {"count", g.count},
                   {"ids", g.caption_ids}});
  }
  return out;
}

Json results_to_json(const std::vector<QueryResult>& results) {
  Json out = Json::array();
  for (const auto& r : results) {
    Json contexts = Json::array();
    for (const auto& c : r.contexts) contexts.push_back(context_to_json(c));
    Json item{{"id", r.id},
              {"caption", r.caption},
              {"combined_score", r.combined_score},
              {"phrase_score", r.phrase_score},
              {"simple_score", r.simple_score},
              {"contexts", std::move(contexts)}};
    if (r.image_uri) item["image_uri"] = *r.image_uri;
    out.push_back(std::move(item));
  }
  return out;
}

std::string dump_json(const Json& json, bool pretty) {
  return json.dump(pretty ? 2 : -1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace anvil
