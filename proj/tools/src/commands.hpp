#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "litgraph/kg_store.hpp"
#include "litgraph/synth.hpp"

namespace litgraph::cli {

// Commands write data to `out` and diagnostics to `err`; failures are thrown
// as litgraph::Error subclasses and mapped to exit codes by the caller.

void cmd_synth(const PipelineConfig& config, SyntheticSpec spec, std::ostream& out);

// Parses `graph_file`, prints "<triples> triples, <entities> entities,
// <relations> relations" and writes the interned graph to out_dir/graph.tsv.
GraphStats cmd_ingest(const PipelineConfig& config, const std::filesystem::path& graph_file, std::ostream& out);

void cmd_split(const PipelineConfig& config, const SplitRatios& ratios, std::ostream& out);

void cmd_train(const PipelineConfig& config, ModelKind kind, std::ostream& out, std::ostream& err);

// Evaluates every listed model (all with embeddings on disk when empty),
// stores per-model results and writes report.md / report.csv.
void cmd_eval(const PipelineConfig& config, std::vector<ModelKind> kinds, std::ostream& out, std::ostream& err);

void cmd_recommend(const std::filesystem::path& embeddings, const std::string& query,
                   const std::optional<std::filesystem::path>& candidates, std::size_t top_k, std::ostream& out);

void cmd_hpo(const PipelineConfig& config, ModelKind kind, int trials, std::ostream& out, std::ostream& err);

// Rebuilds report.md / report.csv from stored per-model results.
void cmd_report(const PipelineConfig& config, std::ostream& out);

// Known labels sharing the longest prefix with `query`, best first.
std::vector<std::string> nearest_by_prefix(std::span<const std::string> labels, const std::string& query,
                                           std::size_t limit);

KnowledgeGraph load_graph(const PipelineConfig& config);

}  // namespace litgraph::cli
