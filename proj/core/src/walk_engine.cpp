#include "litgraph/walk_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <thread>

#include "litgraph/error.hpp"
#include "litgraph/rng.hpp"

namespace litgraph {

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw InputError("walks_per_node must be >= 1");
  if (walk_length < 2) throw InputError("walk_length must be >= 2");
}

namespace {

void check_weight(double w) {
  if (!(w > 0) || !std::isfinite(w)) throw InputError("relation weights must be finite and > 0");
}

}  // namespace

RelationWeights::RelationWeights(double default_weight) : default_(default_weight) {
  check_weight(default_weight);
}

void RelationWeights::set(RelationId relation, double weight) {
  check_weight(weight);
  weights_[relation] = weight;
}

double RelationWeights::weight(RelationId relation) const {
  const auto it = weights_.find(relation);
  return it == weights_.end() ? default_ : it->second;
}

RelationWeights RelationWeights::read_tsv(std::istream& in, const KnowledgeGraph& graph,
                                          std::vector<std::string>* unknown) {
  RelationWeights out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(line_no, "expected relation<TAB>weight");
    }
    const std::string label = line.substr(0, tab);
    const std::string value = line.substr(tab + 1);
    double w = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), w);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
      throw ParseError(line_no, "malformed weight '" + value + "'");
    }
    if (!(w > 0)) throw ParseError(line_no, "weight must be > 0");
    if (label == "*") {
      out.default_ = w;
    } else if (const auto rel = graph.find_relation(label)) {
      out.set(*rel, w);
    } else if (unknown) {
      unknown->push_back(label);
    }
  }
  return out;
}

TransitionDistribution transition_distribution(const KnowledgeGraph& graph, EntityId node,
                                               const RelationWeights& weights) {
  if (node >= graph.entity_count()) throw UnknownEntityError("node id out of range");
  TransitionDistribution d;
  const auto out = graph.outgoing(node);
  const auto in = graph.incoming(node);
  d.slots.insert(d.slots.end(), out.begin(), out.end());
  d.slots.insert(d.slots.end(), in.begin(), in.end());
  double total = 0;
  d.probabilities.reserve(d.slots.size());
  for (const auto& s : d.slots) {
    d.probabilities.push_back(weights.weight(s.relation));
    total += d.probabilities.back();
  }
  for (auto& p : d.probabilities) p /= total;
  return d;
}

namespace {

// Undirected CSR view with cumulative slot weights per node.
class Walker {
 public:
  Walker(const KnowledgeGraph& graph, const RelationWeights* weights) : biased_(weights != nullptr) {
    const auto n = graph.entity_count();
    offsets_.assign(n + 1, 0);
    for (EntityId v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + graph.degree(v);
    targets_.resize(offsets_[n]);
    if (biased_) cumulative_.resize(offsets_[n]);
    for (EntityId v = 0; v < n; ++v) {
      std::size_t k = offsets_[v];
      double acc = 0;
      for (const auto span : {graph.outgoing(v), graph.incoming(v)}) {
        for (const auto& s : span) {
          targets_[k] = s.neighbor;
          if (biased_) {
            acc += weights->weight(s.relation);
            cumulative_[k] = acc;
          }
          ++k;
        }
      }
    }
  }

  EntityId step(EntityId v, Rng& rng) const {
    const std::size_t lo = offsets_[v];
    const std::size_t deg = offsets_[v + 1] - lo;
    if (!biased_) return targets_[lo + rng.below(deg)];
    const auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(lo);
    const auto last = first + static_cast<std::ptrdiff_t>(deg);
    const double x = rng.uniform() * *(last - 1);
    auto it = std::upper_bound(first, last, x);
    if (it == last) --it;
    return targets_[lo + static_cast<std::size_t>(it - first)];
  }

  bool isolated(EntityId v) const { return offsets_[v] == offsets_[v + 1]; }

 private:
  bool biased_;
  std::vector<std::size_t> offsets_;
  std::vector<EntityId> targets_;
  std::vector<double> cumulative_;
};

WalkCorpus generate(const KnowledgeGraph& graph, const WalkConfig& config, const RelationWeights* weights,
                    unsigned threads) {
  config.validate();
  if (graph.entity_count() == 0) throw InputError("cannot walk an empty graph");
  const Walker walker(graph, weights);
  const std::size_t n = graph.entity_count();
  const std::size_t total = n * static_cast<std::size_t>(config.walks_per_node);

  WalkCorpus corpus;
  corpus.config = config;
  corpus.biased = weights != nullptr;
  if (weights) corpus.weights = *weights;
  corpus.vocab_size = n;
  corpus.walks.resize(total);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < total; k += stride) {
      const auto start = static_cast<EntityId>(k % n);
      const auto pass = k / n;
      Rng rng(derive_seed(config.seed, start, pass));
      auto& walk = corpus.walks[k];
      walk.reserve(static_cast<std::size_t>(config.walk_length));
      walk.push_back(start);
      if (walker.isolated(start)) continue;
      while (walk.size() < static_cast<std::size_t>(config.walk_length)) {
        walk.push_back(walker.step(walk.back(), rng));
      }
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return corpus;
}

}  // namespace

WalkCorpus generate_uniform_walks(const KnowledgeGraph& graph, const WalkConfig& config, unsigned threads) {
  return generate(graph, config, nullptr, threads);
}

WalkCorpus generate_biased_walks(const KnowledgeGraph& graph, const WalkConfig& config,
                                 const RelationWeights& weights, unsigned threads) {
  return generate(graph, config, &weights, threads);
}

void write_corpus(std::ostream& out, const WalkCorpus& corpus) {
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) out << (i ? " " : "") << walk[i];
    out << '\n';
  }
}

}  // namespace litgraph
