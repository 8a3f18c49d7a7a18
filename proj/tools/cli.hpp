#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "anvil/index.hpp"

namespace anvil::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDataError = 2;

// argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

// The ranked listing printed by `query`: score column, caption, and one
// starred line per anchor with its contexts.
std::string render_results(const std::string& query, const std::vector<QueryResult>& results);

}  // namespace anvil::cli
