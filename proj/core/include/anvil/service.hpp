#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anvil/index.hpp"

namespace anvil {

struct ExcludedContext {
  std::string anchor;   // lemma
  std::string context;  // compared after normalize_context
};

struct QueryRequest {
  std::string query;
  std::size_t limit = 10;
  std::optional<double> alpha;
  std::vector<ExcludedContext> exclude_contexts;
};

// A rejected request body; `status` is the HTTP status to answer with.
class RequestError : public std::runtime_error {
 public:
  RequestError(int status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

inline constexpr std::size_t kMaxLimit = 100;

// Body: {"query": str, "limit": 1..100, "alpha": 0..1, "exclude_contexts":
// [{"anchor": a, "context": c} | [a, c], ...]}. Only query is required.
// Throws RequestError(400) for malformed input and 422 for a blank query.
QueryRequest parse_query_request(std::string_view body);

struct QueryResponse {
  std::vector<QueryResult> results;
  std::vector<ContextGroup> groups;
};

// Retrieves k_candidates results, drops those carrying an excluded context,
// keeps the first `limit` and groups their contexts. Captions with no
// context are grouped under the query's first head lemma.
QueryResponse answer_query(const Index& index, const Resources& resources,
                           const RetrievalParams& defaults, const QueryRequest& request);

// results and groups, without timing.
std::string response_body(const QueryResponse& response, std::optional<double> timing_ms = {});

struct Reply {
  int status = 200;
  std::string body;
};

// Transport-independent handlers behind the HTTP routes. Safe to call from
// many threads; each request works on one index snapshot.
class QueryService {
 public:
  QueryService(std::shared_ptr<IndexStore> store, std::shared_ptr<const Resources> resources,
               RetrievalParams defaults = {});

  Reply health() const;
  Reply query(std::string_view body) const;
  Reply caption(std::string_view id) const;

  IndexStore& store() const { return *store_; }

 private:
  std::shared_ptr<IndexStore> store_;
  std::shared_ptr<const Resources> resources_;
  RetrievalParams defaults_;
};

}  // namespace anvil
