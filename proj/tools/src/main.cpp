#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "commands.hpp"
#include "litgraph/error.hpp"

namespace {

using litgraph::cli::PipelineConfig;

template <typename T>
void override_if(const std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

int run(int argc, char** argv) {
  CLI::App app{"litgraph: knowledge-graph embeddings, link prediction and recommendation ranking"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir, config_file, graph, ground_truth, candidates, weights;
  std::optional<unsigned> threads;
  app.add_option("--seed", seed, "Global random seed (default 42)");
  app.add_option("--out-dir", out_dir, "Artifact directory (default ./out)");
  app.add_option("--config", config_file, "INI config; command-line flags take precedence");
  app.add_option("--threads", threads, "Worker threads for walks and HPO trials");

  litgraph::SyntheticSpec spec;
  auto* synth = app.add_subcommand("synth", "Generate the planted-community synthetic KG");
  synth->add_option("--entities", spec.entity_count, "Books plus tags");
  synth->add_option("--communities", spec.community_count);
  synth->add_option("--groups", spec.group_count, "Hidden relevance groups");
  synth->add_option("--tags", spec.tag_count);
  synth->add_option("--queries", spec.query_count);
  synth->add_option("--locality", spec.locality, "Ring distance bound for topology edges");
  synth->add_option("--intra", spec.intra_probability, "Topology edge probability inside a community");
  synth->add_option("--inter", spec.inter_probability, "Topology edge probability across communities");
  synth->add_option("--noise", spec.noise_probability, "Book-tag edge probability");

  std::string ingest_file;
  auto* ingest = app.add_subcommand("ingest", "Parse a graph file and store the interned graph");
  ingest->add_option("graph", ingest_file, "N-Triples (.nt) or head<TAB>relation<TAB>tail file")->required();

  litgraph::SplitRatios ratios;
  auto* split = app.add_subcommand("split", "Split edges 80/10/10 into train/validation/test");
  split->add_option("--graph", graph, "Graph file (default: the ingested graph)");
  split->add_option("--train", ratios.train);
  split->add_option("--validation", ratios.validation);
  split->add_option("--test", ratios.test);

  std::string model_name;
  std::optional<int> dimension, walks_per_node, walk_length, window, hidden_dim, layers;
  std::optional<double> weight_decay;
  auto* train = app.add_subcommand("train", "Train one model and write its embeddings");
  train->add_option("--model", model_name, "deepwalk | brw | hybrid | rgcn")->required();
  train->add_option("--weights", weights, "Relation weights TSV (brw, hybrid)");
  train->add_option("--graph", graph);
  train->add_option("--dimension", dimension, "Skip-gram dimension (shallow models)");
  train->add_option("--walks-per-node", walks_per_node);
  train->add_option("--walk-length", walk_length);
  train->add_option("--window", window);
  train->add_option("--hidden-dim", hidden_dim, "R-GCN hidden dimension");
  train->add_option("--layers", layers, "R-GCN layers");
  train->add_option("--weight-decay", weight_decay, "R-GCN weight decay");

  std::string models_list, ks_text;
  auto* eval = app.add_subcommand("eval", "Link-prediction AUC and ranking metrics, then the report");
  eval->add_option("--models", models_list, "Comma-separated models (default: all trained)");
  eval->add_option("--ground-truth", ground_truth, "query<TAB>relevant TSV")->check(CLI::ExistingFile);
  eval->add_option("--candidates", candidates, "One candidate IRI per line")->check(CLI::ExistingFile);
  eval->add_option("--ks", ks_text, "Cutoffs, e.g. 5,10");
  eval->add_option("--graph", graph);

  std::string rec_embeddings, rec_query;
  std::optional<std::string> rec_candidates;
  std::size_t top_k = 10;
  auto* recommend = app.add_subcommand("recommend", "Rank candidates by cosine similarity to a query");
  recommend->add_option("--embeddings", rec_embeddings)->required();
  recommend->add_option("--query", rec_query)->required();
  recommend->add_option("--candidates", rec_candidates);
  recommend->add_option("--top-k", top_k)->check(CLI::PositiveNumber);

  std::string hpo_model;
  int trials = 20;
  auto* hpo = app.add_subcommand("hpo", "Random search maximizing validation AUC");
  hpo->add_option("--model", hpo_model)->required();
  hpo->add_option("--trials", trials)->check(CLI::PositiveNumber);
  hpo->add_option("--weights", weights);
  hpo->add_option("--graph", graph);

  auto* report = app.add_subcommand("report", "Rebuild report.md / report.csv from stored results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  PipelineConfig config;
  if (config_file) litgraph::cli::apply_config_file(config, *config_file);
  override_if(seed, config.seed);
  if (out_dir) config.out_dir = *out_dir;
  override_if(threads, config.models.threads);
  if (graph) config.graph = *graph;
  if (ground_truth) config.ground_truth = *ground_truth;
  if (candidates) config.candidates = *candidates;
  if (weights) config.weights = *weights;
  if (!ks_text.empty()) config.ks = litgraph::cli::parse_ks(ks_text);
  for (auto* s : {&config.models.deepwalk, &config.models.brw}) {
    override_if(dimension, s->skipgram.dimension);
    override_if(walks_per_node, s->walk.walks_per_node);
    override_if(walk_length, s->walk.walk_length);
    override_if(window, s->skipgram.window);
  }
  override_if(hidden_dim, config.models.rgcn.hidden_dim);
  override_if(layers, config.models.rgcn.num_layers);
  override_if(weight_decay, config.models.rgcn.weight_decay);

  namespace cli = litgraph::cli;
  if (*synth) {
    cli::cmd_synth(config, spec, std::cout);
  } else if (*ingest) {
    cli::cmd_ingest(config, ingest_file, std::cout);
  } else if (*split) {
    cli::cmd_split(config, ratios, std::cout);
  } else if (*train) {
    cli::cmd_train(config, litgraph::parse_model_kind(model_name), std::cout, std::cerr);
  } else if (*eval) {
    std::vector<litgraph::ModelKind> kinds;
    std::stringstream in(models_list);
    for (std::string item; std::getline(in, item, ',');) {
      if (!item.empty()) kinds.push_back(litgraph::parse_model_kind(item));
    }
    cli::cmd_eval(config, kinds, std::cout, std::cerr);
  } else if (*recommend) {
    std::optional<std::filesystem::path> pool;
    if (rec_candidates) pool = *rec_candidates;
    cli::cmd_recommend(rec_embeddings, rec_query, pool, top_k, std::cout);
  } else if (*hpo) {
    cli::cmd_hpo(config, litgraph::parse_model_kind(hpo_model), trials, std::cout, std::cerr);
  } else if (*report) {
    cli::cmd_report(config, std::cout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const litgraph::UnknownEntityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const litgraph::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
