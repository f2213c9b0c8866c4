#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "litgraph/kg_store.hpp"
#include "litgraph/tensor.hpp"

namespace litgraph {

// One dense vector per entity. Row i belongs to entities()[i]; tables built
// from a KnowledgeGraph use the graph's entity ids as row indices.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  // Throws InputError if the row count differs from the label count, labels
  // repeat, the dimension is zero, or any value is non-finite.
  EmbeddingTable(std::vector<std::string> entities, DenseMatrix vectors, std::string model,
                 std::string config_hash = {});

  std::size_t size() const noexcept { return entities_.size(); }
  std::size_t dimension() const noexcept { return vectors_.cols(); }
  const std::vector<std::string>& entities() const noexcept { return entities_; }
  const DenseMatrix& vectors() const noexcept { return vectors_; }
  std::span<const double> vector(EntityId id) const { return vectors_.row(id); }
  std::optional<EntityId> find(std::string_view label) const;
  const std::string& model() const noexcept { return model_; }
  const std::string& config_hash() const noexcept { return config_hash_; }

  // `#dim=d model=<name>` header, optional `#config=<hash>`, then
  // `entity<TAB>f1<TAB>...<TAB>fd` with shortest round-trip number formatting.
  void write_tsv(std::ostream& out) const;
  static EmbeddingTable read_tsv(std::istream& in);

 private:
  std::vector<std::string> entities_;
  DenseMatrix vectors_;
  std::string model_;
  std::string config_hash_;
  std::unordered_map<std::string, EntityId> index_;
};

struct HybridConfig {
  bool l2_normalize_sources = true;
};

// Row order follows `a`; `b` is aligned by label. Throws InputError listing
// the symmetric difference when the entity sets differ.
EmbeddingTable concat_embeddings(const EmbeddingTable& a, const EmbeddingTable& b, const HybridConfig& config = {},
                                 std::string model = "hybrid");

// 0 when either vector has zero norm. Throws InputError on dimension mismatch.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct RankedEntry {
  EntityId candidate;
  double score;
};

struct RankedList {
  EntityId query = 0;
  std::vector<RankedEntry> entries;  // descending score, ties by ascending id
};

// Cosine ranking of `candidates` (deduplicated, query removed) against the
// query vector, truncated to top_k. Throws UnknownEntityError for ids outside
// the table.
RankedList rank_candidates(const EmbeddingTable& table, EntityId query, std::span<const EntityId> candidates,
                           std::size_t top_k);

// Relation-agnostic endpoint cosine used to score triples for shallow models.
double score_edge_shallow(const EmbeddingTable& table, const Triple& triple);

// CSV `rank,candidate,score` with a header row.
void write_ranked_csv(std::ostream& out, const RankedList& list, const EmbeddingTable& table);

// Shortest decimal form that round-trips to the same double.
std::string format_number(double v);

// FNV-1a digest as 16 hex digits; stable across platforms.
std::string stable_hash(std::string_view text);

}  // namespace litgraph
