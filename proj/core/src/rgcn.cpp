#include "litgraph/rgcn.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "litgraph/error.hpp"
#include "litgraph/evaluation.hpp"
#include "litgraph/rng.hpp"

namespace litgraph {

void RgcnConfig::validate(std::size_t relation_count) const {
  if (hidden_dim < 1) throw InputError("rgcn hidden_dim must be >= 1");
  if (num_layers < 1) throw InputError("rgcn num_layers must be >= 1");
  if (use_basis && (num_bases < 1 || static_cast<std::size_t>(num_bases) > relation_count)) {
    throw InputError("rgcn num_bases must be in [1, relation count]");
  }
  if (!(learning_rate > 0)) throw InputError("rgcn learning_rate must be > 0");
  if (!(weight_decay >= 0)) throw InputError("rgcn weight_decay must be >= 0");
  if (epochs < 0) throw InputError("rgcn epochs must be >= 0");
  if (patience < 1) throw InputError("rgcn patience must be >= 1");
  if (negatives_per_positive < 1) throw InputError("rgcn negatives_per_positive must be >= 1");
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

void glorot(DenseMatrix& m, Rng& rng, double fan_in, double fan_out) {
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (auto& v : m.values()) v = rng.uniform(-bound, bound);
}

}  // namespace

RgcnParameters RgcnParameters::initialize(std::size_t entity_count, std::size_t relation_count,
                                          const RgcnConfig& config) {
  config.validate(relation_count);
  const auto d = static_cast<std::size_t>(config.hidden_dim);
  const auto dd = static_cast<double>(d);
  Rng rng(derive_seed(config.seed, 0x6C9));

  RgcnParameters p;
  p.relation_count = relation_count;
  p.use_basis = config.use_basis;
  p.input = DenseMatrix(entity_count, d);
  glorot(p.input, rng, static_cast<double>(entity_count), dd);
  for (int l = 0; l < config.num_layers; ++l) {
    RgcnLayer layer;
    layer.self_loop = DenseMatrix(d, d);
    glorot(layer.self_loop, rng, dd, dd);
    if (config.use_basis) {
      const auto b = static_cast<std::size_t>(config.num_bases);
      for (std::size_t k = 0; k < b; ++k) {
        layer.bases.emplace_back(d, d);
        glorot(layer.bases.back(), rng, dd, dd);
      }
      layer.coefficients = DenseMatrix(2 * relation_count, b);
      glorot(layer.coefficients, rng, static_cast<double>(2 * relation_count), static_cast<double>(b));
    } else {
      for (std::size_t s = 0; s < 2 * relation_count; ++s) {
        layer.relation.emplace_back(d, d);
        glorot(layer.relation.back(), rng, dd, dd);
      }
    }
    p.layers.push_back(std::move(layer));
  }
  p.decoder = DenseMatrix(relation_count, d);
  glorot(p.decoder, rng, static_cast<double>(relation_count), dd);
  return p;
}

DenseMatrix compose_basis(std::span<const DenseMatrix> bases, std::span<const double> coefficients) {
  if (bases.empty()) throw InputError("compose_basis: no bases");
  if (bases.size() != coefficients.size()) throw InputError("compose_basis: coefficient count differs from bases");
  DenseMatrix out(bases.front().rows(), bases.front().cols());
  for (std::size_t b = 0; b < bases.size(); ++b) {
    if (bases[b].rows() != out.rows() || bases[b].cols() != out.cols()) {
      throw InputError("compose_basis: bases differ in shape");
    }
    out.add_scaled(bases[b], coefficients[b]);
  }
  return out;
}

DenseMatrix RgcnParameters::relation_matrix(std::size_t layer, std::size_t slot) const {
  const auto& l = layers.at(layer);
  if (slot >= slot_count()) throw InputError("relation slot out of range");
  if (!use_basis) return l.relation.at(slot);
  return compose_basis(l.bases, l.coefficients.row(slot));
}

RgcnParameters RgcnParameters::zeros_like() const {
  RgcnParameters z = *this;
  for (auto* block : z.blocks()) block->fill(0.0);
  return z;
}

std::vector<DenseMatrix*> RgcnParameters::blocks() {
  std::vector<DenseMatrix*> out{&input};
  for (auto& l : layers) {
    out.push_back(&l.self_loop);
    for (auto& m : l.relation) out.push_back(&m);
    for (auto& m : l.bases) out.push_back(&m);
    if (use_basis) out.push_back(&l.coefficients);
  }
  out.push_back(&decoder);
  return out;
}

std::vector<const DenseMatrix*> RgcnParameters::blocks() const {
  auto mutable_blocks = const_cast<RgcnParameters*>(this)->blocks();
  return {mutable_blocks.begin(), mutable_blocks.end()};
}

std::vector<std::string> RgcnParameters::block_names() const {
  std::vector<std::string> out{"input"};
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string prefix = "layer" + std::to_string(i) + ".";
    out.push_back(prefix + "self_loop");
    for (std::size_t s = 0; s < layers[i].relation.size(); ++s) out.push_back(prefix + "relation" + std::to_string(s));
    for (std::size_t b = 0; b < layers[i].bases.size(); ++b) out.push_back(prefix + "basis" + std::to_string(b));
    if (use_basis) out.push_back(prefix + "coefficients");
  }
  out.push_back("decoder");
  return out;
}

std::size_t RgcnParameters::parameter_count() const {
  std::size_t n = 0;
  for (const auto* b : blocks()) n += b->size();
  return n;
}

std::vector<double> RgcnParameters::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto* b : blocks()) out.insert(out.end(), b->values().begin(), b->values().end());
  return out;
}

void RgcnParameters::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw InputError("RgcnParameters::assign: size mismatch");
  std::size_t offset = 0;
  for (auto* b : blocks()) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), b->size(), b->values().begin());
    offset += b->size();
  }
}

// ---------------------------------------------------------------------------
// Message graph and forward pass

RgcnGraph::RgcnGraph(std::size_t entity_count, std::size_t relation_count, std::span<const Triple> edges)
    : entity_count_(entity_count), relation_count_(relation_count), messages_(2 * relation_count) {
  std::vector<std::vector<std::uint32_t>> in_count(2 * relation_count, std::vector<std::uint32_t>(entity_count, 0));
  for (const auto& t : edges) {
    if (t.head >= entity_count || t.tail >= entity_count || t.relation >= relation_count) {
      throw InputError("RgcnGraph: edge references ids outside the graph");
    }
    messages_[t.relation].push_back({t.tail, t.head, 0.0});
    messages_[t.relation + relation_count].push_back({t.head, t.tail, 0.0});
    ++in_count[t.relation][t.tail];
    ++in_count[t.relation + relation_count][t.head];
  }
  for (std::size_t s = 0; s < messages_.size(); ++s) {
    for (auto& m : messages_[s]) m.norm = 1.0 / in_count[s][m.target];
  }
}

DenseMatrix rgcn_forward(const RgcnGraph& graph, const RgcnParameters& params, RgcnForwardCache* cache) {
  if (params.input.rows() != graph.entity_count()) throw InputError("rgcn_forward: input table size mismatch");
  if (params.relation_count != graph.relation_count()) throw InputError("rgcn_forward: relation count mismatch");
  const std::size_t n = graph.entity_count();
  const std::size_t d = params.input.cols();
  const std::size_t layers = params.layers.size();

  if (cache) {
    *cache = RgcnForwardCache{};
    cache->hidden.push_back(params.input);
  }
  DenseMatrix h = params.input;
  for (std::size_t l = 0; l < layers; ++l) {
    DenseMatrix z = matmul_a_bt(h, params.layers[l].self_loop);
    std::vector<DenseMatrix> aggregated(graph.slot_count());
    std::vector<DenseMatrix> weights(graph.slot_count());
    for (std::size_t s = 0; s < graph.slot_count(); ++s) {
      const auto msgs = graph.messages(s);
      if (msgs.empty()) continue;
      DenseMatrix agg(n, d);
      for (const auto& m : msgs) {
        auto dst = agg.row(m.target);
        const auto src = h.row(m.source);
        for (std::size_t k = 0; k < d; ++k) dst[k] += m.norm * src[k];
      }
      weights[s] = params.relation_matrix(l, s);
      z.add_scaled(matmul_a_bt(agg, weights[s]), 1.0);
      aggregated[s] = std::move(agg);
    }
    const bool last = l + 1 == layers;
    DenseMatrix next = elementwise(last ? Activation::identity : Activation::relu, z);
    if (!next.all_finite()) throw NumericError("rgcn_forward: non-finite activation in layer " + std::to_string(l));
    if (cache) {
      cache->preactivation.push_back(std::move(z));
      cache->aggregated.push_back(std::move(aggregated));
      cache->weights.push_back(std::move(weights));
      cache->hidden.push_back(next);
    }
    h = std::move(next);
  }
  return h;
}

std::vector<double> score_triples(const DenseMatrix& embeddings, const DenseMatrix& decoder,
                                  std::span<const Triple> triples) {
  std::vector<double> out;
  out.reserve(triples.size());
  for (const auto& t : triples) {
    if (t.relation >= decoder.rows()) {
      throw InputError("score_triples: no decoder diagonal for relation " + std::to_string(t.relation));
    }
    if (t.head >= embeddings.rows() || t.tail >= embeddings.rows()) {
      throw UnknownEntityError("score_triples: entity id out of range");
    }
    const auto eh = embeddings.row(t.head);
    const auto et = embeddings.row(t.tail);
    const auto dr = decoder.row(t.relation);
    double s = 0.0;
    for (std::size_t k = 0; k < dr.size(); ++k) s += eh[k] * dr[k] * et[k];
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loss and backward pass

double rgcn_loss(const RgcnGraph& graph, const RgcnParameters& params, double weight_decay,
                 std::span<const Triple> positives, std::span<const Triple> negatives, RgcnParameters* gradient) {
  const std::size_t total = positives.size() + negatives.size();
  if (total == 0) throw InputError("rgcn_loss: no samples");

  RgcnForwardCache cache;
  const DenseMatrix emb = rgcn_forward(graph, params, gradient ? &cache : nullptr);
  const auto pos_scores = score_triples(emb, params.decoder, positives);
  const auto neg_scores = score_triples(emb, params.decoder, negatives);
  const double inv_m = 1.0 / static_cast<double>(total);

  double loss = 0.0;
  for (const double s : pos_scores) loss += softplus(-s);
  for (const double s : neg_scores) loss += softplus(s);
  loss *= inv_m;

  double sq = 0.0;
  for (const auto* b : params.blocks()) sq += dot(b->values(), b->values());
  loss += 0.5 * weight_decay * sq;

  if (!gradient) return loss;

  *gradient = params.zeros_like();
  const std::size_t d = emb.cols();
  DenseMatrix d_h(emb.rows(), d);

  auto backprop_score = [&](const Triple& t, double g) {
    const auto eh = emb.row(t.head);
    const auto et = emb.row(t.tail);
    const auto dr = params.decoder.row(t.relation);
    auto gh = d_h.row(t.head);
    auto gt = d_h.row(t.tail);
    auto gd = gradient->decoder.row(t.relation);
    for (std::size_t k = 0; k < d; ++k) {
      gh[k] += g * dr[k] * et[k];
      gt[k] += g * dr[k] * eh[k];
      gd[k] += g * eh[k] * et[k];
    }
  };
  // d/ds of softplus(-s) is sigma(s) - 1, of softplus(s) is sigma(s).
  for (std::size_t i = 0; i < positives.size(); ++i) backprop_score(positives[i], (sigmoid(pos_scores[i]) - 1.0) * inv_m);
  for (std::size_t i = 0; i < negatives.size(); ++i) backprop_score(negatives[i], sigmoid(neg_scores[i]) * inv_m);

  const std::size_t layers = params.layers.size();
  for (std::size_t li = layers; li-- > 0;) {
    const auto& layer = params.layers[li];
    auto& glayer = gradient->layers[li];
    DenseMatrix d_z = std::move(d_h);
    if (li + 1 != layers) {
      const auto z = cache.preactivation[li].values();
      auto dz = d_z.values();
      for (std::size_t k = 0; k < dz.size(); ++k) {
        if (z[k] <= 0.0) dz[k] = 0.0;
      }
    }
    const DenseMatrix& h_in = cache.hidden[li];
    glayer.self_loop.add_scaled(matmul_at_b(d_z, h_in), 1.0);
    DenseMatrix d_prev = matmul(d_z, layer.self_loop);

    for (std::size_t s = 0; s < graph.slot_count(); ++s) {
      const DenseMatrix& agg = cache.aggregated[li][s];
      if (agg.empty()) continue;
      const DenseMatrix d_w = matmul_at_b(d_z, agg);
      if (params.use_basis) {
        for (std::size_t b = 0; b < layer.bases.size(); ++b) {
          glayer.bases[b].add_scaled(d_w, layer.coefficients(s, b));
          glayer.coefficients(s, b) += dot(d_w.values(), layer.bases[b].values());
        }
      } else {
        glayer.relation[s].add_scaled(d_w, 1.0);
      }
      const DenseMatrix d_agg = matmul(d_z, cache.weights[li][s]);
      for (const auto& m : graph.messages(s)) {
        auto dst = d_prev.row(m.source);
        const auto src = d_agg.row(m.target);
        for (std::size_t k = 0; k < d; ++k) dst[k] += m.norm * src[k];
      }
    }
    d_h = std::move(d_prev);
  }
  gradient->input.add_scaled(d_h, 1.0);

  if (weight_decay > 0.0) {
    const auto p_blocks = params.blocks();
    auto g_blocks = gradient->blocks();
    for (std::size_t i = 0; i < p_blocks.size(); ++i) g_blocks[i]->add_scaled(*p_blocks[i], weight_decay);
  }
  return loss;
}

double rgcn_link_auc(const RgcnGraph& message_graph, const RgcnParameters& params, std::span<const Triple> positives,
                     std::span<const Triple> negatives) {
  const DenseMatrix emb = rgcn_forward(message_graph, params);
  const auto pos = score_triples(emb, params.decoder, positives);
  const auto neg = score_triples(emb, params.decoder, negatives);
  return auc(pos, neg).auc;
}

// ---------------------------------------------------------------------------
// Training

namespace {

class Adam {
 public:
  Adam(const RgcnParameters& shape, double lr) : m_(shape.zeros_like()), v_(shape.zeros_like()), lr_(lr) {}

  void step(RgcnParameters& params, RgcnParameters& grad) {
    ++t_;
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    const double c1 = 1.0 - std::pow(beta1, t_);
    const double c2 = 1.0 - std::pow(beta2, t_);
    auto p = params.blocks();
    auto g = grad.blocks();
    auto m = m_.blocks();
    auto v = v_.blocks();
    for (std::size_t b = 0; b < p.size(); ++b) {
      auto pv = p[b]->values();
      const auto gv = g[b]->values();
      auto mv = m[b]->values();
      auto vv = v[b]->values();
      for (std::size_t k = 0; k < pv.size(); ++k) {
        mv[k] = beta1 * mv[k] + (1.0 - beta1) * gv[k];
        vv[k] = beta2 * vv[k] + (1.0 - beta2) * gv[k] * gv[k];
        pv[k] -= lr_ * (mv[k] / c1) / (std::sqrt(vv[k] / c2) + eps);
      }
    }
  }

 private:
  RgcnParameters m_;
  RgcnParameters v_;
  double lr_;
  int t_ = 0;
};

EmbeddingTable to_table(const KnowledgeGraph& graph, DenseMatrix emb, const RgcnConfig& config) {
  const std::string repr = std::to_string(config.hidden_dim) + "|" + std::to_string(config.num_layers) + "|" +
                           std::to_string(config.use_basis) + "|" + std::to_string(config.num_bases) + "|" +
                           format_number(config.learning_rate) + "|" + format_number(config.weight_decay) + "|" +
                           std::to_string(config.epochs) + "|" + std::to_string(config.patience) + "|" +
                           std::to_string(config.negatives_per_positive) + "|" + std::to_string(config.seed);
  return EmbeddingTable(graph.entity_labels(), std::move(emb), "rgcn", stable_hash(repr));
}

}  // namespace

RgcnResult train_rgcn(const KnowledgeGraph& graph, const DataSplit& split, const RgcnConfig& config) {
  config.validate(graph.relation_count());
  if (split.validation.empty()) throw InputError("train_rgcn: empty validation set");
  if (split.train.empty()) throw InputError("train_rgcn: empty training set");

  const RgcnGraph messages(graph.entity_count(), graph.relation_count(), split.train);
  RgcnParameters params = RgcnParameters::initialize(graph.entity_count(), graph.relation_count(), config);
  const auto val_negatives =
      sample_negatives(graph, split.validation, config.negatives_per_positive, derive_seed(config.seed, 0x7A1));

  RgcnResult result{params, {}, {}};
  Adam adam(params, config.learning_rate);
  RgcnParameters grad;
  int since_best = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto negatives = sample_negatives(graph, split.train, config.negatives_per_positive,
                                            derive_seed(config.seed, 0x7E, static_cast<std::uint64_t>(epoch)));
    const double loss = rgcn_loss(messages, params, config.weight_decay, split.train, negatives.negatives, &grad);
    if (!std::isfinite(loss)) {
      throw NumericError("train_rgcn: non-finite loss in epoch " + std::to_string(epoch));
    }
    adam.step(params, grad);
    const double val_auc = rgcn_link_auc(messages, params, split.validation, val_negatives.negatives);
    result.log.epochs.push_back({loss, val_auc});

    if (!result.log.best_epoch || val_auc > result.log.best_validation_auc()) {
      result.log.best_epoch = static_cast<std::size_t>(epoch);
      result.parameters = params;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }

  result.embeddings = to_table(graph, rgcn_forward(messages, result.parameters), config);
  return result;
}

// ---------------------------------------------------------------------------
// Checkpoint

namespace {

void write_block(std::ostream& out, const std::string& name, const DenseMatrix& m) {
  out << "block " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << format_number(row[c]);
    out << '\n';
  }
}

}  // namespace

void write_checkpoint(std::ostream& out, const RgcnConfig& config, const RgcnParameters& params,
                      const TrainingLog& log) {
  out << "litgraph-rgcn-checkpoint 1\n";
  out << "config hidden_dim=" << config.hidden_dim << " num_layers=" << config.num_layers
      << " use_basis=" << (config.use_basis ? 1 : 0) << " num_bases=" << config.num_bases
      << " learning_rate=" << format_number(config.learning_rate)
      << " weight_decay=" << format_number(config.weight_decay) << " epochs=" << config.epochs
      << " patience=" << config.patience << " negatives_per_positive=" << config.negatives_per_positive
      << " seed=" << config.seed << '\n';
  out << "shape entities=" << params.input.rows() << " relations=" << params.relation_count << '\n';
  const auto names = params.block_names();
  const auto blocks = params.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) write_block(out, names[i], *blocks[i]);
  out << "log epochs=" << log.epochs.size() << " best=";
  if (log.best_epoch) {
    out << *log.best_epoch;
  } else {
    out << "none";
  }
  out << '\n';
  for (std::size_t e = 0; e < log.epochs.size(); ++e) {
    out << e << ' ' << format_number(log.epochs[e].loss) << ' ' << format_number(log.epochs[e].validation_auc)
        << '\n';
  }
}

RgcnCheckpoint read_checkpoint(std::istream& in) {
  auto fail = [](const std::string& msg) -> void { throw InputError("rgcn checkpoint: " + msg); };
  std::string line, word;
  if (!std::getline(in, line) || line != "litgraph-rgcn-checkpoint 1") fail("bad magic line");

  RgcnCheckpoint ck;
  std::size_t entities = 0, relations = 0;
  auto parse_kv = [&](const std::string& text, auto&& on_pair) {
    std::istringstream fields(text);
    fields >> word;
    std::string kv;
    while (fields >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) fail("malformed field " + kv);
      on_pair(kv.substr(0, eq), kv.substr(eq + 1));
    }
  };
  if (!std::getline(in, line) || !line.starts_with("config ")) fail("missing config line");
  parse_kv(line, [&](const std::string& k, const std::string& v) {
    if (k == "hidden_dim") ck.config.hidden_dim = std::stoi(v);
    else if (k == "num_layers") ck.config.num_layers = std::stoi(v);
    else if (k == "use_basis") ck.config.use_basis = v == "1";
    else if (k == "num_bases") ck.config.num_bases = std::stoi(v);
    else if (k == "learning_rate") ck.config.learning_rate = std::stod(v);
    else if (k == "weight_decay") ck.config.weight_decay = std::stod(v);
    else if (k == "epochs") ck.config.epochs = std::stoi(v);
    else if (k == "patience") ck.config.patience = std::stoi(v);
    else if (k == "negatives_per_positive") ck.config.negatives_per_positive = std::stoi(v);
    else if (k == "seed") ck.config.seed = std::stoull(v);
  });
  if (!std::getline(in, line) || !line.starts_with("shape ")) fail("missing shape line");
  parse_kv(line, [&](const std::string& k, const std::string& v) {
    if (k == "entities") entities = std::stoul(v);
    else if (k == "relations") relations = std::stoul(v);
  });

  // Shapes come from the config; values overwrite the placeholder init.
  ck.parameters = RgcnParameters::initialize(entities, relations, ck.config);
  const auto names = ck.parameters.block_names();
  auto blocks = ck.parameters.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::string tag, name;
    std::size_t rows = 0, cols = 0;
    in >> tag >> name >> rows >> cols;
    if (!in || tag != "block" || name != names[i]) fail("expected block " + names[i]);
    if (rows != blocks[i]->rows() || cols != blocks[i]->cols()) fail("shape mismatch in block " + name);
    for (auto& v : blocks[i]->values()) {
      std::string tok;
      in >> tok;
      v = std::stod(tok);
    }
  }
  std::string tag, epochs_kv, best_kv;
  in >> tag >> epochs_kv >> best_kv;
  if (tag != "log") fail("missing log section");
  const std::size_t n_epochs = std::stoul(epochs_kv.substr(epochs_kv.find('=') + 1));
  const std::string best = best_kv.substr(best_kv.find('=') + 1);
  if (best != "none") ck.log.best_epoch = std::stoul(best);
  for (std::size_t e = 0; e < n_epochs; ++e) {
    std::size_t idx = 0;
    std::string loss, auc_str;
    in >> idx >> loss >> auc_str;
    if (!in) fail("truncated training log");
    ck.log.epochs.push_back({std::stod(loss), std::stod(auc_str)});
  }
  return ck;
}

}  // namespace litgraph
