#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "litgraph/embeddings.hpp"
#include "litgraph/kg_store.hpp"
#include "litgraph/tensor.hpp"

namespace litgraph {

struct RgcnConfig {
  int hidden_dim = 32;
  int num_layers = 2;
  bool use_basis = false;
  int num_bases = 4;
  double learning_rate = 0.01;
  double weight_decay = 1e-4;
  int epochs = 200;
  int patience = 30;
  int negatives_per_positive = 1;
  std::uint64_t seed = 0;

  // `relation_count` is the number of forward relations in the graph.
  void validate(std::size_t relation_count) const;
};

// Per-layer weights. Relation slots are [0, R) for forward relations and
// [R, 2R) for their inverses. Without basis decomposition `relation` holds one
// matrix per slot; with it, W_s = sum_b coefficients(s, b) * bases[b].
struct RgcnLayer {
  std::vector<DenseMatrix> relation;
  std::vector<DenseMatrix> bases;
  DenseMatrix coefficients;
  DenseMatrix self_loop;
};

struct RgcnParameters {
  DenseMatrix input;  // entity x hidden, learnable featureless input
  std::vector<RgcnLayer> layers;
  DenseMatrix decoder;  // relation x hidden, DistMult diagonals
  std::size_t relation_count = 0;
  bool use_basis = false;

  // Glorot-uniform initialisation from config.seed.
  static RgcnParameters initialize(std::size_t entity_count, std::size_t relation_count, const RgcnConfig& config);

  std::size_t slot_count() const noexcept { return 2 * relation_count; }
  DenseMatrix relation_matrix(std::size_t layer, std::size_t slot) const;

  // Same shapes, all zeros (used as a gradient accumulator).
  RgcnParameters zeros_like() const;

  // Every learnable block in a fixed order; names are stable
  // ("input", "layer0.self_loop", "layer0.relation3", "layer1.basis0",
  // "layer1.coefficients", "decoder").
  std::vector<DenseMatrix*> blocks();
  std::vector<const DenseMatrix*> blocks() const;
  std::vector<std::string> block_names() const;

  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
};

// W = sum_b coefficients[b] * bases[b]. Throws InputError on shape mismatch.
DenseMatrix compose_basis(std::span<const DenseMatrix> bases, std::span<const double> coefficients);

// Normalised message lists built from the edges used for message passing.
// For an edge (h, r, t), t receives h through slot r and h receives t through
// slot r + R; each message is scaled by 1 / (number of messages the receiver
// gets in that slot).
class RgcnGraph {
 public:
  struct Message {
    EntityId target;
    EntityId source;
    double norm;
  };

  RgcnGraph(std::size_t entity_count, std::size_t relation_count, std::span<const Triple> edges);

  std::size_t entity_count() const noexcept { return entity_count_; }
  std::size_t relation_count() const noexcept { return relation_count_; }
  std::size_t slot_count() const noexcept { return messages_.size(); }
  std::span<const Message> messages(std::size_t slot) const { return messages_.at(slot); }

 private:
  std::size_t entity_count_;
  std::size_t relation_count_;
  std::vector<std::vector<Message>> messages_;
};

// Intermediate values kept for the backward pass.
struct RgcnForwardCache {
  std::vector<DenseMatrix> hidden;                   // h^0 .. h^L
  std::vector<DenseMatrix> preactivation;            // z^1 .. z^L
  std::vector<std::vector<DenseMatrix>> aggregated;  // [layer][slot] = A_s h^l
  std::vector<std::vector<DenseMatrix>> weights;     // [layer][slot] = W_s (composed)
};

// h^{l+1}_i = act(sum_s sum_{j in N_s(i)} W_s h^l_j / c_{i,s} + W_0 h^l_i),
// relu on every layer but the last. Throws NumericError naming the layer on
// non-finite activations.
DenseMatrix rgcn_forward(const RgcnGraph& graph, const RgcnParameters& params, RgcnForwardCache* cache = nullptr);

// DistMult: sum_d e_h[d] * decoder(r, d) * e_t[d].
std::vector<double> score_triples(const DenseMatrix& embeddings, const DenseMatrix& decoder,
                                  std::span<const Triple> triples);

// Mean binary cross-entropy of sigma(score) over positives (label 1) and
// negatives (label 0) plus weight_decay / 2 * ||theta||^2. When `gradient` is
// given it must be shaped like `params` (see zeros_like) and receives dL/dtheta.
double rgcn_loss(const RgcnGraph& graph, const RgcnParameters& params, double weight_decay,
                 std::span<const Triple> positives, std::span<const Triple> negatives,
                 RgcnParameters* gradient = nullptr);

struct EpochRecord {
  double loss = 0.0;
  double validation_auc = 0.0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  std::optional<std::size_t> best_epoch;

  double best_validation_auc() const { return best_epoch ? epochs[*best_epoch].validation_auc : 0.0; }
};

struct RgcnResult {
  RgcnParameters parameters;
  EmbeddingTable embeddings;
  TrainingLog log;
};

// Full-batch Adam (beta = 0.9, 0.999) on rgcn_loss with negatives resampled
// every epoch. Messages use split.train only. Validation AUC is measured after
// each step on a fixed negative set; the best epoch's parameters are returned.
// Throws InputError on an empty validation set and NumericError on divergence.
RgcnResult train_rgcn(const KnowledgeGraph& graph, const DataSplit& split, const RgcnConfig& config);

// Validation-style AUC of DistMult scores for a trained model.
double rgcn_link_auc(const RgcnGraph& message_graph, const RgcnParameters& params, std::span<const Triple> positives,
                     std::span<const Triple> negatives);

void write_checkpoint(std::ostream& out, const RgcnConfig& config, const RgcnParameters& params,
                      const TrainingLog& log);

struct RgcnCheckpoint {
  RgcnConfig config;
  RgcnParameters parameters;
  TrainingLog log;
};

RgcnCheckpoint read_checkpoint(std::istream& in);

}  // namespace litgraph
