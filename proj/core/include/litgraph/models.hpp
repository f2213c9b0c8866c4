#pragma once

#include <optional>
#include <string_view>

#include "litgraph/embeddings.hpp"
#include "litgraph/evaluation.hpp"
#include "litgraph/kg_store.hpp"
#include "litgraph/rgcn.hpp"
#include "litgraph/skipgram.hpp"
#include "litgraph/walk_engine.hpp"

namespace litgraph {

enum class ModelKind { deepwalk, brw, hybrid, rgcn };

// Accepts the command-line keys deepwalk, brw, hybrid, rgcn.
ModelKind parse_model_kind(std::string_view key);
std::string_view model_key(ModelKind kind);
// Row label used in reports: DeepWalk, BRW, Hybrid, R-GCN.
std::string_view model_display_name(ModelKind kind);

struct ShallowSettings {
  WalkConfig walk;
  SkipGramConfig skipgram;
};

struct ModelSettings {
  ShallowSettings deepwalk;
  ShallowSettings brw;
  std::optional<RelationWeights> weights;  // required by brw and hybrid
  HybridConfig hybrid;
  RgcnConfig rgcn;
  unsigned threads = 1;

  // Propagates one seed into every stage.
  void set_seed(std::uint64_t seed);
};

struct TrainedModel {
  ModelKind kind = ModelKind::deepwalk;
  EmbeddingTable embeddings;
  std::optional<RgcnResult> rgcn;
};

// Shallow models walk the training subgraph only; R-GCN passes messages over
// split.train. Hybrid retrains both shallow models with their own settings,
// so its halves equal standalone DeepWalk and BRW runs.
TrainedModel train_model(ModelKind kind, const KnowledgeGraph& graph, const DataSplit& split,
                         const ModelSettings& settings);

EmbeddingTable train_shallow(const KnowledgeGraph& train_graph, const ShallowSettings& settings,
                             const RelationWeights* weights, unsigned threads, std::string model);

// Endpoint cosine; ids must match the table rows.
TripleScorer cosine_scorer(const EmbeddingTable& table);
// DistMult over final-layer embeddings.
TripleScorer distmult_scorer(const EmbeddingTable& table, const DenseMatrix& decoder);

TripleScorer link_scorer(const TrainedModel& model);

// Validation AUC against a fixed negative set drawn with `negative_seed`.
double validation_auc(const TrainedModel& model, const KnowledgeGraph& graph, const DataSplit& split,
                      std::uint64_t negative_seed);

// Reorders `table` so row i belongs to graph entity i. Throws
// UnknownEntityError naming entities without a vector.
EmbeddingTable align_to_graph(const EmbeddingTable& table, const KnowledgeGraph& graph);

}  // namespace litgraph
