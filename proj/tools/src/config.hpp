#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "litgraph/models.hpp"

namespace litgraph::cli {

// Everything a pipeline run needs. Values come from built-in defaults, then
// an optional INI file, then command-line flags.
struct PipelineConfig {
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> graph;
  std::optional<std::filesystem::path> ground_truth;
  std::optional<std::filesystem::path> candidates;
  std::optional<std::filesystem::path> weights;
  std::uint64_t seed = 42;
  ModelSettings models;
  std::vector<std::size_t> ks{5, 10};

  std::filesystem::path graph_artifact() const { return out_dir / "graph.tsv"; }
  std::filesystem::path split_dir() const { return out_dir / "split"; }
  std::filesystem::path embedding_path(ModelKind kind) const;
  std::filesystem::path result_path(ModelKind kind) const;
};

// Sections: [run] seed, threads; [paths] graph, ground_truth, candidates,
// weights, out_dir; [deepwalk] and [brw] walks_per_node, walk_length,
// dimension, window, negatives, epochs, learning_rate; [hybrid] l2_normalize;
// [rgcn] hidden_dim, num_layers, use_basis, num_bases, learning_rate,
// weight_decay, epochs, patience, negatives; [eval] ks. Unknown sections or
// keys raise InputError so typos do not pass silently. Relative paths resolve
// against the file's directory.
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);
void apply_config(PipelineConfig& config, std::istream& in, const std::filesystem::path& base_dir = {});

// Writes the sections of `kind` (plus [run] seed) in the format read above.
void write_model_config(std::ostream& out, const PipelineConfig& config, ModelKind kind);

std::vector<std::size_t> parse_ks(const std::string& text);

}  // namespace litgraph::cli
