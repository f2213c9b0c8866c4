#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "litgraph/embeddings.hpp"
#include "litgraph/tensor.hpp"
#include "litgraph/walk_engine.hpp"

namespace litgraph {

struct SkipGramConfig {
  int dimension = 64;
  int window = 5;
  int negatives_per_pair = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  double noise_exponent = 0.75;
  std::uint64_t seed = 0;

  void validate() const;
  // Stable FNV-1a digest of every field, hex encoded.
  std::string hash() const;
};

struct ContextPair {
  EntityId center;
  EntityId context;

  bool operator==(const ContextPair&) const = default;
};

// Fixed window: for each position i every j != i with |i - j| <= window.
void for_each_pair(std::span<const EntityId> walk, int window, const std::function<void(ContextPair)>& fn);
std::vector<ContextPair> extract_pairs(const WalkCorpus& corpus, int window);

// P(w) proportional to count(w)^exponent over ids [0, corpus.vocab_size).
std::vector<double> noise_distribution(const WalkCorpus& corpus, double exponent = 0.75);

// Negative-sampling pair loss
//   -log sigma(u . v_o) - sum_k log sigma(-u . v_k)
// `negatives` holds one context vector per row.
double sgns_pair_loss(std::span<const double> center, std::span<const double> context, const DenseMatrix& negatives);

struct SgnsPairGradient {
  std::vector<double> center;
  std::vector<double> context;
  DenseMatrix negatives;
};

SgnsPairGradient sgns_pair_gradient(std::span<const double> center, std::span<const double> context,
                                    const DenseMatrix& negatives);

// Plain single-threaded SGD with linear decay of the learning rate to 1e-4 of
// its initial value. Input vectors start uniform in [-0.5/d, 0.5/d], context
// vectors at zero; the input vectors are returned. `vocab[i]` labels id i.
EmbeddingTable train_skipgram(const WalkCorpus& corpus, const SkipGramConfig& config,
                              std::span<const std::string> vocab, std::string model = "skipgram");

}  // namespace litgraph
