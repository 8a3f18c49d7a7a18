#include "anvil/eval.hpp"

#include <algorithm>
#include <cstdio>

#include "anvil/error.hpp"
#include "anvil/json_codec.hpp"

namespace anvil {

namespace {

std::vector<bool> relevance_flags(const std::vector<std::string>& ranking,
                                  const std::set<std::string>& relevant) {
  std::vector<bool> flags;
  flags.reserve(ranking.size());
  std::set<std::string> seen;
  for (const auto& id : ranking) {
    // A repeated id cannot be relevant twice.
    flags.push_back(relevant.count(id) != 0 && seen.insert(id).second);
  }
  return flags;
}

double precision_at(const std::vector<bool>& flags, std::size_t cutoff) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(cutoff, flags.size()); ++i) hits += flags[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(cutoff);
}

void require_relevant(const std::set<std::string>& relevant) {
  if (relevant.empty()) throw Error(ErrorCode::kNoRelevant, "no relevant documents");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = line.find(sep, start);
    out.push_back(line.substr(start, at == std::string_view::npos ? at : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

template <typename Fn>
void for_each_row(std::string_view tsv, Fn&& fn) {
  std::size_t line_no = 0;
  for (std::string_view line : split(tsv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    fn(split(line, '\t'), line_no);
  }
}

std::string fixed(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

Json metrics_json(const QueryMetrics& m) {
  return Json{{"curve", m.curve},
              {"p_at_10pct_recall", m.p_at_10pct_recall},
              {"p_at_5", m.p_at_5},
              {"r_precision", m.r_precision}};
}

}  // namespace

PrecisionCurve interpolated_pr(const std::vector<std::string>& ranking,
                               const std::set<std::string>& relevant) {
  require_relevant(relevant);
  const auto flags = relevance_flags(ranking, relevant);
  const std::size_t r = relevant.size();
  // Best precision among cutoffs reaching each hit count, scanned from the
  // deepest hit count down so levels inherit the max over higher recall.
  PrecisionCurve curve{};
  std::vector<double> best_for_hits(r + 1, 0.0);
  std::size_t hits = 0;
  for (std::size_t c = 1; c <= flags.size(); ++c) {
    hits += flags[c - 1] ? 1 : 0;
    best_for_hits[hits] = std::max(best_for_hits[hits], static_cast<double>(hits) / static_cast<double>(c));
  }
  for (std::size_t level = 0; level <= 10; ++level) {
    double best = 0.0;
    for (std::size_t h = 0; h <= r; ++h) {
      if (h * 10 >= level * r) best = std::max(best, best_for_hits[h]);
    }
    curve[level] = best;
  }
  return curve;
}

QueryMetrics metrics(const std::vector<std::string>& ranking, const std::set<std::string>& relevant) {
  QueryMetrics m;
  m.curve = interpolated_pr(ranking, relevant);
  m.p_at_10pct_recall = m.curve[1];
  const auto flags = relevance_flags(ranking, relevant);
  m.p_at_5 = precision_at(flags, 5);
  m.r_precision = precision_at(flags, relevant.size());
  return m;
}

std::vector<EvalQuery> parse_queries(std::string_view tsv) {
  std::vector<EvalQuery> out;
  for_each_row(tsv, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f.size() != 2) {
      throw SyntaxError(ErrorCode::kBadFieldCount, line, 0, "expected query_id<TAB>text");
    }
    out.push_back({std::string(f[0]), std::string(f[1])});
  });
  return out;
}

Qrels parse_qrels(std::string_view tsv) {
  Qrels out;
  for_each_row(tsv, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f.size() != 3) {
      throw SyntaxError(ErrorCode::kBadFieldCount, line, 0,
                        "expected query_id<TAB>caption_id<TAB>relevance");
    }
    if (f[2] != "0" && f[2] != "1") {
      throw SyntaxError(ErrorCode::kSyntaxError, line, 0, "relevance must be 0 or 1");
    }
    auto& relevant = out[std::string(f[0])];
    if (f[2] == "1") relevant.insert(std::string(f[1]));
  });
  return out;
}

EvalReport run_eval(const Index& index, const Resources& resources,
                    const std::vector<EvalQuery>& queries, const Qrels& qrels,
                    const RetrievalParams& params) {
  EvalReport report;
  report.params = params;
  std::set<std::string> query_ids;
  for (const auto& q : queries) query_ids.insert(q.id);
  for (const auto& [id, relevant] : qrels) {
    if (query_ids.count(id) == 0) report.warnings.push_back("qrels entry for unknown query " + id + " ignored");
  }

  RetrievalParams ranking_params = params;
  ranking_params.limit = params.k_candidates;
  for (const auto& q : queries) {
    const auto judged = qrels.find(q.id);
    if (judged == qrels.end() || judged->second.empty()) {
      report.skipped.emplace_back(q.id, std::string(error_code_name(ErrorCode::kNoRelevant)));
      continue;
    }
    std::vector<std::string> ranking;
    try {
      for (const auto& r : retrieve(index, q.text, resources, ranking_params)) ranking.push_back(r.id);
    } catch (const Error& e) {
      report.skipped.emplace_back(q.id, std::string(error_code_name(e.code())) + ": " + e.what());
      continue;
    }
    QueryEvaluation eval{q.id, q.text, judged->second.size(), ranking.size(), metrics(ranking, judged->second)};
    report.queries.push_back(std::move(eval));
  }
  if (report.queries.empty()) throw Error(ErrorCode::kNoRelevant, "no query has judged relevant captions");

  const double n = static_cast<double>(report.queries.size());
  for (const auto& q : report.queries) {
    for (std::size_t i = 0; i < q.metrics.curve.size(); ++i) report.mean.curve[i] += q.metrics.curve[i];
    report.mean.p_at_10pct_recall += q.metrics.p_at_10pct_recall;
    report.mean.p_at_5 += q.metrics.p_at_5;
    report.mean.r_precision += q.metrics.r_precision;
  }
  for (double& v : report.mean.curve) v /= n;
  report.mean.p_at_10pct_recall /= n;
  report.mean.p_at_5 /= n;
  report.mean.r_precision /= n;
  return report;
}

std::string report_json(const EvalReport& report) {
  Json queries = Json::array();
  for (const auto& q : report.queries) {
    Json item = metrics_json(q.metrics);
    item["id"] = q.id;
    item["text"] = q.text;
    item["relevant"] = q.relevant;
    item["retrieved"] = q.retrieved;
    queries.push_back(std::move(item));
  }
  Json skipped = Json::array();
  for (const auto& [id, reason] : report.skipped) skipped.push_back({{"id", id}, {"reason", reason}});
  Json out{{"queries", std::move(queries)},
           {"mean", metrics_json(report.mean)},
           {"skipped", std::move(skipped)},
           {"warnings", report.warnings},
           {"params",
            {{"alpha", report.params.alpha}, {"k_candidates", report.params.k_candidates}}}};
  return dump_json(out, true) + "\n";
}

std::string report_table(const EvalReport& report) {
  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"query", "P@10%R", "P@5", "R-prec"});
  auto add = [&](const std::string& name, const QueryMetrics& m) {
    rows.push_back({name, fixed(m.p_at_10pct_recall, 4), fixed(m.p_at_5, 4), fixed(m.r_precision, 4)});
  };
  for (const auto& q : report.queries) add(q.id, q.metrics);
  add("mean", report.mean);

  std::array<std::size_t, 4> width{};
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line = row[0] + std::string(width[0] - row[0].size(), ' ');
    for (std::size_t c = 1; c < row.size(); ++c) {
      line += "  " + std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    out += line + "\n";
  }
  out += "\ninterpolated precision (mean)\n";
  for (std::size_t i = 0; i < report.mean.curve.size(); ++i) {
    out += "  " + fixed(static_cast<double>(i) / 10.0, 1) + "  " + fixed(report.mean.curve[i], 4) + "\n";
  }
  for (const auto& [id, reason] : report.skipped) out += "skipped " + id + ": " + reason + "\n";
  for (const auto& w : report.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace anvil
