#include "litgraph/models.hpp"

#include "litgraph/error.hpp"

namespace litgraph {

ModelKind parse_model_kind(std::string_view key) {
  if (key == "deepwalk") return ModelKind::deepwalk;
  if (key == "brw") return ModelKind::brw;
  if (key == "hybrid") return ModelKind::hybrid;
  if (key == "rgcn") return ModelKind::rgcn;
  throw InputError("unknown model '" + std::string(key) + "' (expected deepwalk, brw, hybrid or rgcn)");
}

std::string_view model_key(ModelKind kind) {
  switch (kind) {
    case ModelKind::deepwalk: return "deepwalk";
    case ModelKind::brw: return "brw";
    case ModelKind::hybrid: return "hybrid";
    case ModelKind::rgcn: return "rgcn";
  }
  return "?";
}

std::string_view model_display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::deepwalk: return "DeepWalk";
    case ModelKind::brw: return "BRW";
    case ModelKind::hybrid: return "Hybrid";
    case ModelKind::rgcn: return "R-GCN";
  }
  return "?";
}

void ModelSettings::set_seed(std::uint64_t seed) {
  for (auto* s : {&deepwalk, &brw}) {
    s->walk.seed = seed;
    s->skipgram.seed = seed;
  }
  rgcn.seed = seed;
}

EmbeddingTable train_shallow(const KnowledgeGraph& train_graph, const ShallowSettings& settings,
                             const RelationWeights* weights, unsigned threads, std::string model) {
  const WalkCorpus corpus = weights ? generate_biased_walks(train_graph, settings.walk, *weights, threads)
                                    : generate_uniform_walks(train_graph, settings.walk, threads);
  return train_skipgram(corpus, settings.skipgram, train_graph.entity_labels(), std::move(model));
}

TrainedModel train_model(ModelKind kind, const KnowledgeGraph& graph, const DataSplit& split,
                         const ModelSettings& settings) {
  if ((kind == ModelKind::brw || kind == ModelKind::hybrid) && !settings.weights) {
    throw InputError(std::string(model_key(kind)) + " requires a relation weights file");
  }
  TrainedModel out;
  out.kind = kind;
  if (kind == ModelKind::rgcn) {
    out.rgcn = train_rgcn(graph, split, settings.rgcn);
    out.embeddings = out.rgcn->embeddings;
    return out;
  }

  const KnowledgeGraph train_graph = graph.restricted_to(split.train);
  const auto t = settings.threads;
  switch (kind) {
    case ModelKind::deepwalk:
      out.embeddings = train_shallow(train_graph, settings.deepwalk, nullptr, t, "deepwalk");
      break;
    case ModelKind::brw:
      out.embeddings = train_shallow(train_graph, settings.brw, &*settings.weights, t, "brw");
      break;
    default: {
      const auto dw = train_shallow(train_graph, settings.deepwalk, nullptr, t, "deepwalk");
      const auto bw = train_shallow(train_graph, settings.brw, &*settings.weights, t, "brw");
      out.embeddings = concat_embeddings(dw, bw, settings.hybrid, "hybrid");
      break;
    }
  }
  return out;
}

TripleScorer cosine_scorer(const EmbeddingTable& table) {
  return [&table](const Triple& t) { return score_edge_shallow(table, t); };
}

TripleScorer distmult_scorer(const EmbeddingTable& table, const DenseMatrix& decoder) {
  if (decoder.cols() != table.dimension()) throw InputError("decoder width differs from embedding dimension");
  return [&table, &decoder](const Triple& t) {
    if (t.head >= table.size() || t.tail >= table.size()) throw UnknownEntityError("triple endpoint has no embedding");
    if (t.relation >= decoder.rows()) throw InputError("no decoder diagonal for relation " + std::to_string(t.relation));
    const auto eh = table.vector(t.head);
    const auto et = table.vector(t.tail);
    const auto dr = decoder.row(t.relation);
    double s = 0.0;
    for (std::size_t k = 0; k < dr.size(); ++k) s += eh[k] * dr[k] * et[k];
    return s;
  };
}

TripleScorer link_scorer(const TrainedModel& model) {
  if (model.rgcn) return distmult_scorer(model.embeddings, model.rgcn->parameters.decoder);
  return cosine_scorer(model.embeddings);
}

double validation_auc(const TrainedModel& model, const KnowledgeGraph& graph, const DataSplit& split,
                      std::uint64_t negative_seed) {
  const auto negatives = sample_negatives(graph, split.validation, 1, negative_seed);
  return evaluate_link_prediction(link_scorer(model), split.validation, negatives.negatives).auc;
}

EmbeddingTable align_to_graph(const EmbeddingTable& table, const KnowledgeGraph& graph) {
  if (table.entities() == graph.entity_labels()) return table;
  std::string missing;
  DenseMatrix rows(graph.entity_count(), table.dimension());
  for (EntityId i = 0; i < graph.entity_count(); ++i) {
    const auto& label = graph.entity_label(i);
    const auto id = table.find(label);
    if (!id) {
      missing += " " + label;
      continue;
    }
    const auto src = table.vector(*id);
    std::copy(src.begin(), src.end(), rows.row(i).begin());
  }
  if (!missing.empty()) throw UnknownEntityError("embedding table lacks entities:" + missing);
  return EmbeddingTable(graph.entity_labels(), std::move(rows), table.model(), table.config_hash());
}

}  // namespace litgraph
