#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anvil/index.hpp"

namespace anvil {

// Interpolated precision at recall 0.0, 0.1, ..., 1.0.
using PrecisionCurve = std::array<double, 11>;

struct QueryMetrics {
  PrecisionCurve curve{};
  double p_at_10pct_recall = 0.0;
  double p_at_5 = 0.0;
  double r_precision = 0.0;

  bool operator==(const QueryMetrics&) const = default;
};

// Precision at recall level i/10 is the best precision over all cutoffs
// whose recall reaches i/10 (0 if none does). Recall levels are compared
// in integers, so 3 of 10 relevant counts as reaching 0.3 exactly.
// Errors: NoRelevant when `relevant` is empty.
PrecisionCurve interpolated_pr(const std::vector<std::string>& ranking,
                               const std::set<std::string>& relevant);

// p_at_5 divides by 5 even for shorter rankings; r_precision divides by R.
// Errors: NoRelevant.
QueryMetrics metrics(const std::vector<std::string>& ranking, const std::set<std::string>& relevant);

// query id -> relevant caption ids; a judged query may have none.
using Qrels = std::map<std::string, std::set<std::string>>;

struct EvalQuery {
  std::string id;
  std::string text;
};

// TSV: query_id <TAB> text. '#' lines and blank lines are skipped.
std::vector<EvalQuery> parse_queries(std::string_view tsv);
// TSV: query_id <TAB> caption_id <TAB> 0|1.
Qrels parse_qrels(std::string_view tsv);

struct QueryEvaluation {
  std::string id;
  std::string text;
  std::size_t relevant = 0;
  std::size_t retrieved = 0;
  QueryMetrics metrics;
};

struct EvalReport {
  std::vector<QueryEvaluation> queries;
  QueryMetrics mean;
  // Queries left out of the mean: (id, reason).
  std::vector<std::pair<std::string, std::string>> skipped;
  std::vector<std::string> warnings;
  RetrievalParams params;
};

// Ranks k_candidates results per query (limit is ignored), evaluates each
// query with judged relevant captions and macro-averages. A query whose
// retrieval fails is skipped with the error as reason.
// Errors: NoRelevant when no query could be evaluated.
EvalReport run_eval(const Index& index, const Resources& resources,
                    const std::vector<EvalQuery>& queries, const Qrels& qrels,
                    const RetrievalParams& params);

std::string report_json(const EvalReport& report);
std::string report_table(const EvalReport& report);

}  // namespace anvil
