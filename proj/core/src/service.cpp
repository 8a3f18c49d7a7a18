#include "anvil/service.hpp"

#include <chrono>

#include "anvil/error.hpp"
#include "anvil/json_codec.hpp"

namespace anvil {

namespace {

Json error_json(std::string_view message) { return Json{{"error", message}}; }

Reply error_reply(int status, std::string_view message) {
  return {status, dump_json(error_json(message))};
}

ExcludedContext parse_exclusion(const Json& item) {
  if (item.is_array() && item.size() == 2 && item[0].is_string() && item[1].is_string()) {
    return {item[0].get<std::string>(), item[1].get<std::string>()};
  }
  if (item.is_object() && item.contains("anchor") && item["anchor"].is_string() &&
      item.contains("context") && item["context"].is_string()) {
    return {item["anchor"].get<std::string>(), item["context"].get<std::string>()};
  }
  throw RequestError(400, "exclude_contexts entries must be {anchor, context} or [anchor, context]");
}

bool blank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

bool excluded(const QueryResult& result, const std::vector<ExcludedContext>& exclusions) {
  for (const auto& pair : result.contexts) {
    const std::string text = normalize_context(pair.context_text);
    for (const auto& ex : exclusions) {
      if (ex.anchor == pair.anchor_lemma && normalize_context(ex.context) == text) return true;
    }
  }
  return false;
}

}  // namespace

QueryRequest parse_query_request(std::string_view body) {
  Json json;
  try {
    json = Json::parse(body);
  } catch (const Json::exception&) {
    throw RequestError(400, "request body is not valid JSON");
  }
  if (!json.is_object()) throw RequestError(400, "request body must be a JSON object");
  if (!json.contains("query") || !json["query"].is_string()) {
    throw RequestError(400, "field 'query' must be a string");
  }
  QueryRequest request;
  request.query = json["query"].get<std::string>();
  if (json.contains("limit")) {
    const Json& limit = json["limit"];
    if (!limit.is_number_integer() || limit.get<long long>() < 1 ||
        limit.get<long long>() > static_cast<long long>(kMaxLimit)) {
      throw RequestError(400, "field 'limit' must be an integer in [1, 100]");
    }
    request.limit = limit.get<std::size_t>();
  }
  if (json.contains("alpha") && !json["alpha"].is_null()) {
    const Json& alpha = json["alpha"];
    if (!alpha.is_number() || alpha.get<double>() < 0.0 || alpha.get<double>() > 1.0) {
      throw RequestError(400, "field 'alpha' must be a number in [0, 1]");
    }
    request.alpha = alpha.get<double>();
  }
  if (json.contains("exclude_contexts") && !json["exclude_contexts"].is_null()) {
    const Json& list = json["exclude_contexts"];
    if (!list.is_array()) throw RequestError(400, "field 'exclude_contexts' must be an array");
    for (const auto& item : list) request.exclude_contexts.push_back(parse_exclusion(item));
  }
  if (blank(request.query)) throw RequestError(422, "query is empty");
  return request;
}

QueryResponse answer_query(const Index& index, const Resources& resources,
                           const RetrievalParams& defaults, const QueryRequest& request) {
  RetrievalParams params = defaults;
  if (request.alpha) params.alpha = *request.alpha;
  params.limit = std::max(params.k_candidates, request.limit);

  QueryResponse response;
  for (auto& r : retrieve(index, request.query, resources, params)) {
    if (response.results.size() == request.limit) break;
    if (!excluded(r, request.exclude_contexts)) response.results.push_back(std::move(r));
  }

  std::string none_anchor;
  const ParseOutput query = analyze(request.query, resources.lexicon);
  if (!query.structure.heads().empty()) none_anchor = query.tokens[query.structure.heads().front()].lemma;
  std::vector<CaptionContexts> contexts;
  for (const auto& r : response.results) contexts.push_back({r.id, r.contexts});
  response.groups = group_by_context(contexts, none_anchor);
  return response;
}

std::string response_body(const QueryResponse& response, std::optional<double> timing_ms) {
  Json out{{"results", results_to_json(response.results)}, {"groups", groups_to_json(response.groups)}};
  if (timing_ms) out["timing_ms"] = *timing_ms;
  return dump_json(out);
}

QueryService::QueryService(std::shared_ptr<IndexStore> store, std::shared_ptr<const Resources> resources,
                           RetrievalParams defaults)
    : store_(std::move(store)), resources_(std::move(resources)), defaults_(defaults) {}

Reply QueryService::health() const {
  const auto index = store_->snapshot();
  if (!index) return {503, dump_json(Json{{"status", "loading"}, {"documents", 0}})};
  return {200, dump_json(Json{{"status", "ok"}, {"documents", index->doc_count()}})};
}

Reply QueryService::query(std::string_view body) const {
  const auto index = store_->snapshot();
  if (!index) return error_reply(503, "index not loaded");
  const auto start = std::chrono::steady_clock::now();
  try {
    const QueryRequest request = parse_query_request(body);
    const QueryResponse response = answer_query(*index, *resources_, defaults_, request);
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    return {200, response_body(response, elapsed.count())};
  } catch (const RequestError& e) {
    return error_reply(e.status(), e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmptyQuery) return error_reply(422, e.what());
    if (e.code() == ErrorCode::kIndexEmpty) return error_reply(503, e.what());
    return error_reply(500, e.what());
  }
}

Reply QueryService::caption(std::string_view id) const {
  const auto index = store_->snapshot();
  if (!index) return error_reply(503, "index not loaded");
  const auto it = index->records.find(std::string(id));
  if (it == index->records.end()) return error_reply(404, "no caption with id " + std::string(id));
  const CaptionRecord& r = it->second;
  Json out{{"id", r.id}, {"caption", r.caption}, {"parse", parse_to_json(r.parse)}};
  if (r.image_uri) out["image_uri"] = *r.image_uri;
  return {200, dump_json(out)};
}

}  // namespace anvil
