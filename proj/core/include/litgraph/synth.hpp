#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "litgraph/kg_store.hpp"

namespace litgraph {

// Planted-community book graph. Books are split evenly into communities and
// laid out on a ring inside each one; the topology relation links books of the
// same community whose ring distance is at most `locality` (with probability
// `intra_probability`) and books of different communities with
// `inter_probability`. Books are also dealt evenly into hidden relevance
// groups, so group membership is independent of topology. `query_count` books
// are drawn as queries and the relevance relation links each of them to every
// other member of its group; those links are the ground truth. The noise
// relation attaches books to tag entities uniformly at random.
struct SyntheticSpec {
  std::size_t entity_count = 200;  // books + tags
  std::size_t community_count = 2;
  std::size_t group_count = 16;
  std::size_t tag_count = 40;
  std::size_t query_count = 19;
  std::size_t locality = 12;
  double intra_probability = 0.8;
  double inter_probability = 0.0;
  double noise_probability = 0.005;
  std::string namespace_iri = "http://example.org/litgraph/";
  std::string topology_relation = "relatedTo";
  std::string relevance_relation = "similarTo";
  std::string noise_relation = "hasTag";
  std::uint64_t seed = 42;

  std::size_t book_count() const { return entity_count - tag_count; }
  // Throws InputError on probabilities outside [0, 1], fewer than two
  // communities, or counts that leave a community without a member of every
  // group.
  void validate() const;
};

struct SyntheticDataset {
  std::vector<RawTriple> triples;
  // (query, relevant) pairs: each query book against every other book of its
  // relevance group.
  std::vector<std::pair<std::string, std::string>> ground_truth;
  std::vector<std::string> candidates;  // every book
  std::vector<std::size_t> community;   // per book, in candidate order
};

SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

// graph.nt, ground_truth.tsv, candidates.txt and relation_weights.tsv (the
// relevance relation weighted 5, everything else 1).
void write_synthetic(const std::filesystem::path& dir, const SyntheticSpec& spec, const SyntheticDataset& data);

}  // namespace litgraph
