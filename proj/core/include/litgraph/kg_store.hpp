#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace litgraph {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  auto operator<=>(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(t.head) << 32) | t.tail;
    h ^= static_cast<std::uint64_t>(t.relation) * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

using TripleSet = std::unordered_set<Triple, TripleHash>;

// A statement as it appears in a file. IRIs are stored without angle
// brackets; literals keep their quoted lexical form (including any language
// tag or datatype) so they can be written back unchanged.
struct RawTriple {
  std::string head;
  std::string relation;
  std::string tail;

  bool operator==(const RawTriple&) const = default;
};

std::vector<RawTriple> parse_ntriples(std::istream& in);
std::vector<RawTriple> parse_ntriples(std::string_view text);
std::vector<RawTriple> parse_tsv_triples(std::istream& in);
std::vector<RawTriple> parse_tsv_triples(std::string_view text);

// Dispatches on extension: ".nt" is N-Triples, anything else is TSV.
std::vector<RawTriple> read_triples_file(const std::filesystem::path& path);

// Insertion-ordered string table.
class Interner {
 public:
  std::uint32_t intern(std::string_view label);
  std::optional<std::uint32_t> find(std::string_view label) const;
  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// One incident edge seen from a node. `inverse` is true when the edge points
// into the node (the neighbor is the head).
struct Incidence {
  EntityId neighbor;
  RelationId relation;
  bool inverse;
};

struct GraphStats {
  std::size_t entity_count = 0;
  std::size_t relation_count = 0;
  std::size_t triple_count = 0;
};

// Interned, deduplicated multi-relational directed graph with per-node
// outgoing/incoming adjacency and per-relation edge lists.
class KnowledgeGraph {
 public:
  // Interns labels in first-appearance order (head, relation, tail) and drops
  // duplicate statements. Throws InputError on empty input.
  static KnowledgeGraph build(std::span<const RawTriple> raw);

  // Same entity/relation tables, restricted edge set (e.g. the training
  // split). Isolated entities are kept so ids stay aligned.
  KnowledgeGraph restricted_to(std::span<const Triple> edges) const;

  GraphStats stats() const noexcept {
    return {entities_.size(), relations_.size(), edges_.size()};
  }
  std::size_t entity_count() const noexcept { return entities_.size(); }
  std::size_t relation_count() const noexcept { return relations_.size(); }
  std::size_t triple_count() const noexcept { return edges_.size(); }

  const std::vector<Triple>& edges() const noexcept { return edges_; }
  bool contains(const Triple& t) const { return edge_set_.contains(t); }

  std::span<const Incidence> outgoing(EntityId node) const;
  std::span<const Incidence> incoming(EntityId node) const;
  // Edge indices (into edges()) carrying the given relation.
  std::span<const std::uint32_t> relation_edges(RelationId relation) const;
  std::size_t degree(EntityId node) const { return outgoing(node).size() + incoming(node).size(); }

  const std::string& entity_label(EntityId id) const { return entities_.label(id); }
  const std::string& relation_label(RelationId id) const { return relations_.label(id); }
  const std::vector<std::string>& entity_labels() const noexcept { return entities_.labels(); }
  const std::vector<std::string>& relation_labels() const noexcept { return relations_.labels(); }
  std::optional<EntityId> find_entity(std::string_view label) const { return entities_.find(label); }
  std::optional<RelationId> find_relation(std::string_view label) const { return relations_.find(label); }

  // Maps a raw statement onto interned ids; throws UnknownEntityError when a
  // label is not in the tables.
  Triple resolve(const RawTriple& raw) const;
  RawTriple labels_of(const Triple& t) const;

 private:
  void index_edges();

  Interner entities_;
  Interner relations_;
  std::vector<Triple> edges_;
  TripleSet edge_set_;
  std::vector<std::uint32_t> out_offsets_, in_offsets_, rel_offsets_;
  std::vector<Incidence> out_adj_, in_adj_;
  std::vector<std::uint32_t> rel_edges_;
};

void write_ntriples(std::ostream& out, const KnowledgeGraph& graph);
void write_ntriples(std::ostream& out, const KnowledgeGraph& graph, std::span<const Triple> edges);
void write_tsv_triples(std::ostream& out, const KnowledgeGraph& graph, std::span<const Triple> edges);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct DataSplit {
  std::vector<Triple> train;
  std::vector<Triple> validation;
  std::vector<Triple> test;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  // Entities with degree >= 1 that the repair pass could not place in train.
  std::vector<EntityId> uncovered;
};

// Sizes after the floor/floor/remainder rounding rule.
std::array<std::size_t, 3> split_sizes(std::size_t edge_count, const SplitRatios& ratios);

// Seeded shuffle, partition, then a greedy repair pass that swaps held-out
// edges into train until every non-isolated entity has a training edge.
DataSplit split_edges(const KnowledgeGraph& graph, const SplitRatios& ratios, std::uint64_t seed);

struct NegativeSampleSet {
  std::vector<Triple> negatives;
  // Index of the positive each negative was derived from.
  std::vector<std::size_t> source;
  int per_positive_ratio = 1;
  std::uint64_t seed = 0;
};

inline constexpr int kMaxCorruptionAttempts = 100;

// Head-or-tail corruption with a fair coin; candidates are rejected while they
// are true edges of `graph`. Throws InputError when a slot exhausts
// kMaxCorruptionAttempts.
NegativeSampleSet sample_negatives(const KnowledgeGraph& graph, std::span<const Triple> positives,
                                   int per_positive_ratio, std::uint64_t seed);

// Split manifest: train.tsv, validation.tsv, test.tsv plus split_manifest.tsv
// holding the seed and ratios.
void write_split(const std::filesystem::path& dir, const KnowledgeGraph& graph, const DataSplit& split);
DataSplit read_split(const std::filesystem::path& dir, const KnowledgeGraph& graph);

}  // namespace litgraph
