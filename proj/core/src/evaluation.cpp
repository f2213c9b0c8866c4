#include "litgraph/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "litgraph/error.hpp"

namespace litgraph {

GroundTruth::GroundTruth(std::map<EntityId, RelevantSet> relevant) : relevant_(std::move(relevant)) {
  for (const auto& [query, set] : relevant_) {
    if (set.empty()) throw InputError("ground truth query " + std::to_string(query) + " has no relevant entities");
  }
}

GroundTruth GroundTruth::read_tsv(std::istream& in, const Resolver& resolve) {
  std::map<EntityId, RelevantSet> relevant;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(line_no, "expected query<TAB>relevant");
    }
    const std::string query = line.substr(0, tab);
    const std::string item = line.substr(tab + 1);
    const auto q = resolve(query);
    if (!q) throw UnknownEntityError("ground truth line " + std::to_string(line_no) + ": unknown entity " + query);
    const auto r = resolve(item);
    if (!r) throw UnknownEntityError("ground truth line " + std::to_string(line_no) + ": unknown entity " + item);
    relevant[*q].insert(*r);
  }
  if (relevant.empty()) throw InputError("ground truth is empty");
  return GroundTruth(std::move(relevant));
}

GroundTruth GroundTruth::read_tsv(std::istream& in, const KnowledgeGraph& graph) {
  return read_tsv(in, [&graph](std::string_view label) { return graph.find_entity(label); });
}

AucReport auc(std::span<const double> positive_scores, std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty()) {
    throw InputError("auc needs at least one positive and one negative score");
  }
  struct Scored {
    double score;
    bool positive;
  };
  std::vector<Scored> all;
  all.reserve(positive_scores.size() + negative_scores.size());
  for (const double s : positive_scores) all.push_back({s, true});
  for (const double s : negative_scores) all.push_back({s, false});
  for (const auto& s : all) {
    if (std::isnan(s.score)) throw NumericError("auc: NaN score");
  }
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });

  // Rank sum of positives with tied groups sharing their mean rank.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t positives_in_group = 0;
    while (j < all.size() && all[j].score == all[i].score) {
      positives_in_group += all[j].positive ? 1 : 0;
      ++j;
    }
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    positive_rank_sum += mean_rank * static_cast<double>(positives_in_group);
    i = j;
  }
  const auto np = static_cast<double>(positive_scores.size());
  const auto nn = static_cast<double>(negative_scores.size());
  AucReport report;
  report.auc = (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
  report.positive_count = positive_scores.size();
  report.negative_count = negative_scores.size();
  return report;
}

int hits_at_k(const RankedList& list, const RelevantSet& relevant, std::size_t k) {
  if (k < 1) throw InputError("hits_at_k: k must be >= 1");
  const std::size_t n = std::min(k, list.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.contains(list.entries[i].candidate)) return 1;
  }
  return 0;
}

double reciprocal_rank(const RankedList& list, const RelevantSet& relevant) {
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    if (relevant.contains(list.entries[i].candidate)) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

double ndcg_at_k(const RankedList& list, const RelevantSet& relevant, std::size_t k) {
  if (k < 1) throw InputError("ndcg_at_k: k must be >= 1");
  if (relevant.empty()) throw InputError("ndcg_at_k: relevant set is empty");
  double dcg = 0.0;
  const std::size_t n = std::min(k, list.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.contains(list.entries[i].candidate)) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  double ideal = 0.0;
  const std::size_t m = std::min(relevant.size(), k);
  for (std::size_t i = 0; i < m; ++i) ideal += 1.0 / std::log2(static_cast<double>(i + 2));
  return dcg / ideal;
}

double RankingReport::hits(std::size_t k) const {
  const auto it = std::find(ks.begin(), ks.end(), k);
  if (it == ks.end()) throw InputError("Hits@" + std::to_string(k) + " was not evaluated");
  return mean_hits[static_cast<std::size_t>(it - ks.begin())];
}

double RankingReport::ndcg(std::size_t k) const {
  const auto it = std::find(ks.begin(), ks.end(), k);
  if (it == ks.end()) throw InputError("nDCG@" + std::to_string(k) + " was not evaluated");
  return mean_ndcg[static_cast<std::size_t>(it - ks.begin())];
}

RankingReport evaluate_ranking(const EmbeddingTable& table, const GroundTruth& truth,
                               std::span<const EntityId> candidates, std::span<const std::size_t> ks) {
  if (truth.size() == 0) throw InputError("evaluate_ranking: empty ground truth");
  if (ks.empty()) throw InputError("evaluate_ranking: empty K list");
  for (const auto k : ks) {
    if (k < 1) throw InputError("evaluate_ranking: K must be >= 1");
  }

  std::string missing;
  for (const auto& [query, _] : truth.queries()) {
    if (query >= table.size()) missing += " " + std::to_string(query);
  }
  if (!missing.empty()) throw UnknownEntityError("queries missing from embedding table:" + missing);

  RelevantSet pool(candidates.begin(), candidates.end());
  RankingReport report;
  report.ks.assign(ks.begin(), ks.end());
  report.mean_hits.assign(ks.size(), 0.0);
  report.mean_ndcg.assign(ks.size(), 0.0);

  for (const auto& [query, relevant] : truth.queries()) {
    QueryRecord rec;
    rec.query = query;
    rec.hits.assign(ks.size(), 0);
    rec.ndcg.assign(ks.size(), 0.0);

    RelevantSet reachable;
    for (const auto r : relevant) {
      if (r != query && pool.contains(r)) reachable.insert(r);
    }
    if (reachable.empty()) {
      report.unreachable_queries.push_back(query);
    } else {
      const auto list = rank_candidates(table, query, candidates, candidates.size());
      rec.reciprocal_rank = reciprocal_rank(list, reachable);
      for (std::size_t i = 0; i < ks.size(); ++i) {
        rec.hits[i] = hits_at_k(list, reachable, ks[i]);
        rec.ndcg[i] = ndcg_at_k(list, reachable, ks[i]);
      }
    }
    report.queries.push_back(std::move(rec));
  }

  const auto n = static_cast<double>(report.queries.size());
  for (const auto& rec : report.queries) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      report.mean_hits[i] += rec.hits[i];
      report.mean_ndcg[i] += rec.ndcg[i];
    }
    report.mean_reciprocal_rank += rec.reciprocal_rank;
  }
  for (auto& v : report.mean_hits) v /= n;
  for (auto& v : report.mean_ndcg) v /= n;
  report.mean_reciprocal_rank /= n;
  return report;
}

AucReport evaluate_link_prediction(const TripleScorer& scorer, std::span<const Triple> positives,
                                   std::span<const Triple> negatives) {
  std::vector<double> pos, neg;
  pos.reserve(positives.size());
  neg.reserve(negatives.size());
  for (const auto& t : positives) pos.push_back(scorer(t));
  for (const auto& t : negatives) neg.push_back(scorer(t));
  return auc(pos, neg);
}

std::vector<EntityId> read_candidates(std::istream& in, const KnowledgeGraph& graph) {
  std::vector<EntityId> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto id = graph.find_entity(line);
    if (!id) throw UnknownEntityError("candidate not in graph: " + line);
    out.push_back(*id);
  }
  if (out.empty()) throw InputError("candidate list is empty");
  return out;
}

// ---------------------------------------------------------------------------
// Report

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

namespace {

constexpr std::size_t kColumns = 5;

std::array<double, kColumns> row_values(const ModelResult& r) {
  return {r.link.auc, r.ranking.hits(10), r.ranking.hits(5), r.ranking.mean_reciprocal_rank, r.ranking.ndcg(10)};
}

}  // namespace

void emit_report_csv(std::ostream& out, std::span<const ModelResult> results) {
  if (results.empty()) throw InputError("report needs at least one model result");
  out << kReportHeader << '\n';
  for (const auto& r : results) {
    out << r.model;
    for (const double v : row_values(r)) out << ',' << format_metric(v);
    out << '\n';
  }
}

void emit_report_markdown(std::ostream& out, std::span<const ModelResult> results) {
  if (results.empty()) throw InputError("report needs at least one model result");
  std::vector<std::array<std::string, kColumns>> cells;
  std::array<std::string, kColumns> best;
  for (const auto& r : results) {
    const auto values = row_values(r);
    std::array<std::string, kColumns> row;
    for (std::size_t c = 0; c < kColumns; ++c) {
      row[c] = format_metric(values[c]);
      // Fixed-width rendering, so lexicographic order is numeric order.
      if (best[c].empty() || row[c] > best[c]) best[c] = row[c];
    }
    cells.push_back(row);
  }
  out << "| Model | AUC | Hits@10 | Hits@5 | MRR | nDCG@10 |\n";
  out << "|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << "| " << results[i].model;
    for (std::size_t c = 0; c < kColumns; ++c) {
      const bool top = cells[i][c] == best[c];
      out << " | " << (top ? "**" : "") << cells[i][c] << (top ? "**" : "");
    }
    out << " |\n";
  }
}

void write_model_result(std::ostream& out, const ModelResult& result) {
  out << "model\t" << result.model << '\n'
      << "auc\t" << format_number(result.link.auc) << '\n'
      << "positives\t" << result.link.positive_count << '\n'
      << "negatives\t" << result.link.negative_count << '\n'
      << "mrr\t" << format_number(result.ranking.mean_reciprocal_rank) << '\n';
  for (std::size_t i = 0; i < result.ranking.ks.size(); ++i) {
    out << "hits@" << result.ranking.ks[i] << '\t' << format_number(result.ranking.mean_hits[i]) << '\n';
    out << "ndcg@" << result.ranking.ks[i] << '\t' << format_number(result.ranking.mean_ndcg[i]) << '\n';
  }
}

ModelResult read_model_result(std::istream& in) {
  ModelResult r;
  std::map<std::size_t, double> hits, ndcg;
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    const std::string key = line.substr(0, tab);
    const std::string value = line.substr(tab + 1);
    try {
      if (key == "model") {
        r.model = value;
      } else if (key == "auc") {
        r.link.auc = std::stod(value);
      } else if (key == "positives") {
        r.link.positive_count = std::stoul(value);
      } else if (key == "negatives") {
        r.link.negative_count = std::stoul(value);
      } else if (key == "mrr") {
        r.ranking.mean_reciprocal_rank = std::stod(value);
      } else if (key.starts_with("hits@")) {
        hits[std::stoul(key.substr(5))] = std::stod(value);
      } else if (key.starts_with("ndcg@")) {
        ndcg[std::stoul(key.substr(5))] = std::stod(value);
      }
    } catch (const std::logic_error&) {
      throw InputError("malformed result field '" + key + "'");
    }
  }
  if (r.model.empty()) throw InputError("result file has no model name");
  for (const auto& [k, v] : hits) {
    r.ranking.ks.push_back(k);
    r.ranking.mean_hits.push_back(v);
    r.ranking.mean_ndcg.push_back(ndcg.contains(k) ? ndcg.at(k) : 0.0);
  }
  return r;
}

}  // namespace litgraph
