#pragma once

// JSON forms of the library's value types. Field names here are the wire
// format of the index files, the CLI's --format json output and the HTTP
// service.

#include <string>
#include <vector>

#include "json.hpp"

#include "anvil/context.hpp"
#include "anvil/index.hpp"
#include "anvil/matcher.hpp"
#include "anvil/text_analysis.hpp"

namespace anvil {

using Json = nlohmann::json;

Json parse_to_json(const ParseOutput& parse);
ParseOutput parse_from_json(const Json& json);

Json match_to_json(const MatchResult& match);

// {anchor, text, category}; anchor is the lemma of the matched word.
Json context_to_json(const ContextPair& pair);
Json groups_to_json(const std::vector<ContextGroup>& groups);
Json results_to_json(const std::vector<QueryResult>& results);

// Serialization shared by all JSON writers: keys sorted, doubles in
// shortest round-trip form.
std::string dump_json(const Json& json, bool pretty = false);

}  // namespace anvil
