#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "litgraph/embeddings.hpp"
#include "litgraph/error.hpp"
#include "litgraph/evaluation.hpp"
#include "litgraph/hpo.hpp"
#include "litgraph/rng.hpp"

namespace litgraph::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTestNegativeTag = 0x7E57;
constexpr ModelKind kAllModels[] = {ModelKind::deepwalk, ModelKind::brw, ModelKind::hybrid, ModelKind::rgcn};

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  return f;
}

std::ifstream open_in(const fs::path& path, const std::string& what) {
  if (!fs::exists(path)) throw InputError(what + " not found: " + path.string());
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path.string());
  return f;
}

fs::path checkpoint_path(const PipelineConfig& config) { return config.out_dir / "models" / "rgcn.ckpt"; }

ModelSettings settings_with_weights(const PipelineConfig& config, const KnowledgeGraph& graph, std::ostream& err) {
  ModelSettings s = config.models;
  s.set_seed(config.seed);
  if (config.weights) {
    auto in = open_in(*config.weights, "weights file");
    std::vector<std::string> unknown;
    s.weights = RelationWeights::read_tsv(in, graph, &unknown);
    for (const auto& u : unknown) err << "warning: weights file names unknown relation " << u << '\n';
  }
  return s;
}

void write_reports(const PipelineConfig& config, std::span<const ModelResult> results, std::ostream& out) {
  {
    auto f = open_out(config.out_dir / "report.csv");
    emit_report_csv(f, results);
  }
  {
    auto f = open_out(config.out_dir / "report.md");
    emit_report_markdown(f, results);
  }
  emit_report_markdown(out, results);
}

}  // namespace

KnowledgeGraph load_graph(const PipelineConfig& config) {
  const fs::path path = config.graph ? *config.graph : config.graph_artifact();
  if (!fs::exists(path)) {
    throw InputError("graph not found: " + path.string() + (config.graph ? "" : " (run `ingest` first)"));
  }
  return KnowledgeGraph::build(read_triples_file(path));
}

void cmd_synth(const PipelineConfig& config, SyntheticSpec spec, std::ostream& out) {
  spec.seed = config.seed;
  const auto data = generate_synthetic(spec);
  write_synthetic(config.out_dir, spec, data);
  out << "wrote " << (config.out_dir / "graph.nt").string() << ": " << data.triples.size() << " triples, "
      << data.candidates.size() << " books, " << data.ground_truth.size() << " ground-truth pairs\n";
}

GraphStats cmd_ingest(const PipelineConfig& config, const fs::path& graph_file, std::ostream& out) {
  if (!fs::exists(graph_file)) throw InputError("graph file not found: " + graph_file.string());
  const auto graph = KnowledgeGraph::build(read_triples_file(graph_file));
  const auto stats = graph.stats();
  {
    auto f = open_out(config.graph_artifact());
    write_tsv_triples(f, graph, graph.edges());
  }
  out << stats.triple_count << " triples, " << stats.entity_count << " entities, " << stats.relation_count
      << " relations\n";
  return stats;
}

void cmd_split(const PipelineConfig& config, const SplitRatios& ratios, std::ostream& out) {
  const auto graph = load_graph(config);
  const auto split = split_edges(graph, ratios, config.seed);
  write_split(config.split_dir(), graph, split);
  out << "train " << split.train.size() << ", validation " << split.validation.size() << ", test "
      << split.test.size() << '\n';
}

void cmd_train(const PipelineConfig& config, ModelKind kind, std::ostream& out, std::ostream& err) {
  const auto graph = load_graph(config);
  const auto split = read_split(config.split_dir(), graph);
  const auto settings = settings_with_weights(config, graph, err);
  if ((kind == ModelKind::brw || kind == ModelKind::hybrid) && !settings.weights) {
    throw InputError(std::string(model_key(kind)) + " needs a relation weights file (--weights)");
  }
  const auto model = train_model(kind, graph, split, settings);
  const auto path = config.embedding_path(kind);
  {
    auto f = open_out(path);
    model.embeddings.write_tsv(f);
  }
  if (model.rgcn) {
    auto ck = open_out(checkpoint_path(config));
    write_checkpoint(ck, settings.rgcn, model.rgcn->parameters, model.rgcn->log);
    auto log = open_out(config.out_dir / "models" / "rgcn_log.csv");
    log << "epoch,loss,validation_auc\n";
    for (std::size_t e = 0; e < model.rgcn->log.epochs.size(); ++e) {
      log << e << ',' << format_number(model.rgcn->log.epochs[e].loss) << ','
          << format_number(model.rgcn->log.epochs[e].validation_auc) << '\n';
    }
    if (model.rgcn->log.best_epoch) {
      out << "best epoch " << *model.rgcn->log.best_epoch << " of " << model.rgcn->log.epochs.size()
          << ", validation AUC " << format_metric(model.rgcn->log.best_validation_auc()) << '\n';
    }
  }
  out << "wrote " << path.string() << " (" << model.embeddings.size() << " entities, dim "
      << model.embeddings.dimension() << ")\n";
}

void cmd_eval(const PipelineConfig& config, std::vector<ModelKind> kinds, std::ostream& out, std::ostream& err) {
  const auto graph = load_graph(config);
  const auto split = read_split(config.split_dir(), graph);
  if (!config.ground_truth) throw InputError("eval needs a ground-truth file (--ground-truth)");
  GroundTruth truth;
  {
    auto in = open_in(*config.ground_truth, "ground-truth file");
    truth = GroundTruth::read_tsv(in, graph);
  }
  std::vector<EntityId> candidates;
  if (config.candidates) {
    auto in = open_in(*config.candidates, "candidate file");
    candidates = read_candidates(in, graph);
  } else {
    candidates.resize(graph.entity_count());
    for (EntityId i = 0; i < graph.entity_count(); ++i) candidates[i] = i;
    err << "note: no candidate file given; ranking against all " << candidates.size() << " entities\n";
  }

  if (kinds.empty()) {
    for (const auto k : kAllModels) {
      if (fs::exists(config.embedding_path(k))) kinds.push_back(k);
    }
    if (kinds.empty()) throw InputError("no embeddings under " + (config.out_dir / "embeddings").string());
  }

  const auto negatives = sample_negatives(graph, split.test, 1, derive_seed(config.seed, kTestNegativeTag));
  std::vector<ModelResult> results;
  for (const auto kind : kinds) {
    auto in = open_in(config.embedding_path(kind), std::string(model_key(kind)) + " embeddings");
    const auto table = align_to_graph(EmbeddingTable::read_tsv(in), graph);
    ModelResult r;
    r.model = std::string(model_display_name(kind));
    if (kind == ModelKind::rgcn) {
      auto ck_in = open_in(checkpoint_path(config), "rgcn checkpoint");
      const auto ck = read_checkpoint(ck_in);
      r.link = evaluate_link_prediction(distmult_scorer(table, ck.parameters.decoder), split.test, negatives.negatives);
    } else {
      r.link = evaluate_link_prediction(cosine_scorer(table), split.test, negatives.negatives);
    }
    r.ranking = evaluate_ranking(table, truth, candidates, config.ks);
    for (const auto q : r.ranking.unreachable_queries) {
      err << "warning: " << r.model << ": no relevant entity of " << graph.entity_label(q)
          << " is among the candidates\n";
    }
    auto f = open_out(config.result_path(kind));
    write_model_result(f, r);
    results.push_back(std::move(r));
  }
  write_reports(config, results, out);
}

std::vector<std::string> nearest_by_prefix(std::span<const std::string> labels, const std::string& query,
                                           std::size_t limit) {
  std::vector<std::pair<std::size_t, const std::string*>> scored;
  for (const auto& l : labels) {
    const auto mismatch = std::mismatch(l.begin(), l.end(), query.begin(), query.end());
    scored.emplace_back(static_cast<std::size_t>(mismatch.first - l.begin()), &l);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(*scored[i].second);
  return out;
}

void cmd_recommend(const fs::path& embeddings, const std::string& query, const std::optional<fs::path>& candidates,
                   std::size_t top_k, std::ostream& out) {
  auto in = open_in(embeddings, "embedding file");
  const auto table = EmbeddingTable::read_tsv(in);
  const auto q = table.find(query);
  if (!q) {
    std::string msg = "unknown query " + query + "; nearest known:";
    for (const auto& l : nearest_by_prefix(table.entities(), query, 5)) msg += "\n  " + l;
    throw UnknownEntityError(msg);
  }
  std::vector<EntityId> pool;
  if (candidates) {
    auto cin = open_in(*candidates, "candidate file");
    std::string line;
    while (std::getline(cin, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const auto id = table.find(line);
      if (!id) throw UnknownEntityError("candidate has no embedding: " + line);
      pool.push_back(*id);
    }
  } else {
    pool.resize(table.size());
    for (EntityId i = 0; i < table.size(); ++i) pool[i] = i;
  }
  write_ranked_csv(out, rank_candidates(table, *q, pool, top_k), table);
}

void cmd_hpo(const PipelineConfig& config, ModelKind kind, int trials, std::ostream& out, std::ostream& err) {
  const auto graph = load_graph(config);
  const auto split = read_split(config.split_dir(), graph);
  const auto base = settings_with_weights(config, graph, err);
  const auto space = SearchSpace::default_for(kind);
  const auto study = run_model_search(kind, graph, split, space, trials, config.seed, base, base.threads);

  const fs::path dir = config.out_dir / "hpo";
  const std::string key(model_key(kind));
  {
    auto f = open_out(dir / (key + "_study.csv"));
    write_study_csv(f, study);
  }
  PipelineConfig best = config;
  apply_trial(best.models, kind, study.best().config);
  {
    auto f = open_out(dir / (key + "_best.ini"));
    write_model_config(f, best, kind);
  }
  for (const auto& t : study.trials) {
    if (!t.objective) err << "trial " << t.index << " failed: " << t.failure << '\n';
  }
  out << "best trial " << study.best_index << " of " << study.trials.size() << ": validation AUC "
      << format_metric(*study.best().objective);
  for (const auto& [name, value] : study.best().config.values) out << ", " << name << '=' << format_number(value);
  out << "\nwrote " << (dir / (key + "_best.ini")).string() << '\n';
}

void cmd_report(const PipelineConfig& config, std::ostream& out) {
  std::vector<ModelResult> results;
  for (const auto kind : kAllModels) {
    const auto path = config.result_path(kind);
    if (!fs::exists(path)) continue;
    auto in = open_in(path, "result file");
    results.push_back(read_model_result(in));
  }
  if (results.empty()) throw InputError("no model results under " + (config.out_dir / "results").string());
  write_reports(config, results, out);
}

}  // namespace litgraph::cli
