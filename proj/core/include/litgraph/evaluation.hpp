#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "litgraph/embeddings.hpp"
#include "litgraph/kg_store.hpp"

namespace litgraph {

using RelevantSet = std::set<EntityId>;

// Query entity -> non-empty set of relevant entities (binary relevance).
class GroundTruth {
 public:
  using Resolver = std::function<std::optional<EntityId>(std::string_view)>;

  GroundTruth() = default;
  // Throws InputError when a query maps to an empty set.
  explicit GroundTruth(std::map<EntityId, RelevantSet> relevant);

  // `query<TAB>relevant` lines; repeated queries union their sets. Labels the
  // resolver does not know raise UnknownEntityError; an empty file raises
  // InputError.
  static GroundTruth read_tsv(std::istream& in, const Resolver& resolve);
  static GroundTruth read_tsv(std::istream& in, const KnowledgeGraph& graph);

  const std::map<EntityId, RelevantSet>& queries() const noexcept { return relevant_; }
  std::size_t size() const noexcept { return relevant_.size(); }

 private:
  std::map<EntityId, RelevantSet> relevant_;
};

struct AucReport {
  double auc = 0.5;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
};

// Mann-Whitney form: fraction of (positive, negative) pairs ordered correctly,
// ties counting one half. Throws InputError if either side is empty.
AucReport auc(std::span<const double> positive_scores, std::span<const double> negative_scores);

// 1 iff a relevant entity sits in the first k entries.
int hits_at_k(const RankedList& list, const RelevantSet& relevant, std::size_t k);
// 1 / rank of the first relevant entry, 0 when none is listed.
double reciprocal_rank(const RankedList& list, const RelevantSet& relevant);
// Binary gains, log2(i + 1) discount; the ideal ordering places
// min(|relevant|, k) gains first.
double ndcg_at_k(const RankedList& list, const RelevantSet& relevant, std::size_t k);

struct QueryRecord {
  EntityId query = 0;
  std::vector<int> hits;      // one per K
  double reciprocal_rank = 0.0;
  std::vector<double> ndcg;   // one per K
};

struct RankingReport {
  std::vector<std::size_t> ks;
  std::vector<QueryRecord> queries;
  std::vector<double> mean_hits;
  double mean_reciprocal_rank = 0.0;
  std::vector<double> mean_ndcg;
  // Queries whose relevant entities all fall outside the candidate set.
  std::vector<EntityId> unreachable_queries;

  // Aggregate lookups; throw InputError when k was not evaluated.
  double hits(std::size_t k) const;
  double ndcg(std::size_t k) const;
};

// Ranks every candidate for each query with rank_candidates, then scores the
// full ranking. Relevant sets are intersected with candidates minus the query
// before scoring. Throws UnknownEntityError listing queries the table lacks.
RankingReport evaluate_ranking(const EmbeddingTable& table, const GroundTruth& truth,
                               std::span<const EntityId> candidates, std::span<const std::size_t> ks);

// One entity label per line; blank and '#' lines skipped. Unknown labels raise
// UnknownEntityError, an empty list InputError.
std::vector<EntityId> read_candidates(std::istream& in, const KnowledgeGraph& graph);

using TripleScorer = std::function<double(const Triple&)>;

AucReport evaluate_link_prediction(const TripleScorer& scorer, std::span<const Triple> positives,
                                   std::span<const Triple> negatives);

struct ModelResult {
  std::string model;
  AucReport link;
  RankingReport ranking;
};

inline constexpr std::string_view kReportHeader = "Model,AUC,Hits@10,Hits@5,MRR,nDCG@10";

// Fixed-width 4-decimal rendering.
std::string format_metric(double v);

// CSV with kReportHeader and one row per model.
void emit_report_csv(std::ostream& out, std::span<const ModelResult> results);
// Markdown table with the same columns; column maxima in bold.
void emit_report_markdown(std::ostream& out, std::span<const ModelResult> results);

// Flat per-model metrics file (key<TAB>value) so reports can be regenerated.
void write_model_result(std::ostream& out, const ModelResult& result);
ModelResult read_model_result(std::istream& in);

}  // namespace litgraph
