#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "litgraph/kg_store.hpp"

namespace litgraph {

struct WalkConfig {
  int walks_per_node = 10;
  int walk_length = 40;  // nodes per walk, including the start node
  std::uint64_t seed = 0;

  void validate() const;
};

// Positive per-relation weights with a default for unlisted relations.
class RelationWeights {
 public:
  RelationWeights() = default;
  explicit RelationWeights(double default_weight);

  void set(RelationId relation, double weight);
  double weight(RelationId relation) const;
  double default_weight() const noexcept { return default_; }
  bool is_uniform() const noexcept { return weights_.empty(); }
  const std::unordered_map<RelationId, double>& overrides() const noexcept { return weights_; }

  // Reads `relation-iri<TAB>weight` lines. A `*` relation sets the default.
  // Relations absent from the graph are skipped and reported in `unknown`.
  static RelationWeights read_tsv(std::istream& in, const KnowledgeGraph& graph,
                                  std::vector<std::string>* unknown = nullptr);

 private:
  std::unordered_map<RelationId, double> weights_;
  double default_ = 1.0;
};

// Walks see the graph as undirected: a node's slots are its outgoing edges
// followed by its incoming edges.
struct TransitionDistribution {
  std::vector<Incidence> slots;
  std::vector<double> probabilities;
};

TransitionDistribution transition_distribution(const KnowledgeGraph& graph, EntityId node,
                                               const RelationWeights& weights);

struct WalkCorpus {
  std::vector<std::vector<EntityId>> walks;
  WalkConfig config;
  bool biased = false;
  RelationWeights weights;
  std::size_t vocab_size = 0;
};

// walks_per_node walks per entity, laid out pass-major: walk w of node v is at
// index w * entity_count + v. Each walk draws from its own stream derived from
// (seed, v, w), so `threads` does not affect the result.
WalkCorpus generate_uniform_walks(const KnowledgeGraph& graph, const WalkConfig& config, unsigned threads = 1);
WalkCorpus generate_biased_walks(const KnowledgeGraph& graph, const WalkConfig& config,
                                 const RelationWeights& weights, unsigned threads = 1);

// Debug dump: one walk per line, space-separated ids.
void write_corpus(std::ostream& out, const WalkCorpus& corpus);

}  // namespace litgraph
