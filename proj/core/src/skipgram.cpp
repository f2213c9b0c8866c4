#include "litgraph/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "litgraph/error.hpp"
#include "litgraph/rng.hpp"

namespace litgraph {

void SkipGramConfig::validate() const {
  if (dimension < 2) throw InputError("skip-gram dimension must be >= 2");
  if (window < 1) throw InputError("skip-gram window must be >= 1");
  if (negatives_per_pair < 1) throw InputError("negatives_per_pair must be >= 1");
  if (epochs < 0) throw InputError("epochs must be >= 0");
  if (!(learning_rate > 0)) throw InputError("learning_rate must be > 0");
  if (!(noise_exponent >= 0)) throw InputError("noise_exponent must be >= 0");
}

std::string SkipGramConfig::hash() const {
  const std::string repr = std::to_string(dimension) + "|" + std::to_string(window) + "|" +
                           std::to_string(negatives_per_pair) + "|" + std::to_string(epochs) + "|" +
                           format_number(learning_rate) + "|" + format_number(noise_exponent) + "|" +
                           std::to_string(seed);
  return stable_hash(repr);
}

void for_each_pair(std::span<const EntityId> walk, int window, const std::function<void(ContextPair)>& fn) {
  if (window < 1) throw InputError("window must be >= 1");
  const auto n = walk.size();
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > w ? i - w : 0;
    const std::size_t hi = std::min(n - 1, i + w);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j != i) fn({walk[i], walk[j]});
    }
  }
}

std::vector<ContextPair> extract_pairs(const WalkCorpus& corpus, int window) {
  std::vector<ContextPair> out;
  for (const auto& walk : corpus.walks) {
    for_each_pair(walk, window, [&](ContextPair p) { out.push_back(p); });
  }
  return out;
}

std::vector<double> noise_distribution(const WalkCorpus& corpus, double exponent) {
  std::vector<double> counts(corpus.vocab_size, 0.0);
  std::size_t total = 0;
  for (const auto& walk : corpus.walks) {
    for (const auto token : walk) {
      if (token >= counts.size()) throw InputError("corpus token outside vocabulary");
      counts[token] += 1.0;
      ++total;
    }
  }
  if (total == 0) throw InputError("noise_distribution: empty corpus");
  double z = 0.0;
  for (auto& c : counts) {
    c = c > 0.0 ? std::pow(c, exponent) : 0.0;
    z += c;
  }
  for (auto& c : counts) c /= z;
  return counts;
}

double sgns_pair_loss(std::span<const double> center, std::span<const double> context, const DenseMatrix& negatives) {
  // -log sigma(x) = softplus(-x)
  double loss = softplus(-dot(center, context));
  for (std::size_t k = 0; k < negatives.rows(); ++k) loss += softplus(dot(center, negatives.row(k)));
  return loss;
}

SgnsPairGradient sgns_pair_gradient(std::span<const double> center, std::span<const double> context,
                                    const DenseMatrix& negatives) {
  const std::size_t d = center.size();
  SgnsPairGradient g;
  g.center.assign(d, 0.0);
  g.context.assign(d, 0.0);
  g.negatives = DenseMatrix(negatives.rows(), d);

  const double pos = sigmoid(dot(center, context)) - 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    g.center[i] += pos * context[i];
    g.context[i] = pos * center[i];
  }
  for (std::size_t k = 0; k < negatives.rows(); ++k) {
    const auto neg = negatives.row(k);
    const double s = sigmoid(dot(center, neg));
    auto gn = g.negatives.row(k);
    for (std::size_t i = 0; i < d; ++i) {
      g.center[i] += s * neg[i];
      gn[i] = s * center[i];
    }
  }
  return g;
}

namespace {

class NoiseSampler {
 public:
  explicit NoiseSampler(const std::vector<double>& p) : cumulative_(p.size()) {
    std::partial_sum(p.begin(), p.end(), cumulative_.begin());
  }

  EntityId draw(Rng& rng) const {
    const double x = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    if (it == cumulative_.end()) --it;
    return static_cast<EntityId>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

std::size_t count_pairs(const WalkCorpus& corpus, int window) {
  std::size_t total = 0;
  const auto w = static_cast<std::size_t>(window);
  for (const auto& walk : corpus.walks) {
    const std::size_t n = walk.size();
    for (std::size_t i = 0; i < n; ++i) {
      total += std::min(i, w) + std::min(n - 1 - i, w);
    }
  }
  return total;
}

}  // namespace

EmbeddingTable train_skipgram(const WalkCorpus& corpus, const SkipGramConfig& config,
                              std::span<const std::string> vocab, std::string model) {
  config.validate();
  if (corpus.walks.empty()) throw InputError("train_skipgram: empty corpus");
  if (vocab.size() < corpus.vocab_size) throw InputError("train_skipgram: vocabulary does not cover corpus");

  const std::size_t n = vocab.size();
  const auto d = static_cast<std::size_t>(config.dimension);
  Rng init_rng(derive_seed(config.seed, 0x1417));
  DenseMatrix input(n, d);
  const double bound = 0.5 / static_cast<double>(d);
  for (auto& v : input.values()) v = init_rng.uniform(-bound, bound);
  DenseMatrix output(n, d, 0.0);

  auto noise_p = noise_distribution(corpus, config.noise_exponent);
  noise_p.resize(n, 0.0);
  const NoiseSampler noise(noise_p);
  const std::size_t pairs_per_epoch = count_pairs(corpus, config.window);
  const double total_pairs = static_cast<double>(pairs_per_epoch) * config.epochs;
  constexpr double kFinalFraction = 1e-4;

  std::vector<std::size_t> order(corpus.walks.size());
  std::vector<double> center_grad(d);
  std::size_t processed = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(config.seed, 0xE90C, static_cast<std::uint64_t>(epoch)));
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order.begin(), order.end());
    double epoch_loss = 0.0;
    double lr = config.learning_rate;

    for (const auto w : order) {
      const auto& walk = corpus.walks[w];
      for_each_pair(walk, config.window, [&](ContextPair p) {
        lr = config.learning_rate * (1.0 - (1.0 - kFinalFraction) * (static_cast<double>(processed) / total_pairs));
        ++processed;
        auto u = input.row(p.center);
        std::fill(center_grad.begin(), center_grad.end(), 0.0);

        auto update = [&](EntityId target, double label) {
          auto v = output.row(target);
          const double x = dot(u, v);
          epoch_loss += label > 0 ? softplus(-x) : softplus(x);
          // Descent step on the pair loss: g = label - sigma(x).
          const double g = lr * (label - sigmoid(x));
          for (std::size_t i = 0; i < d; ++i) center_grad[i] += g * v[i];
          for (std::size_t i = 0; i < d; ++i) v[i] += g * u[i];
        };

        update(p.context, 1.0);
        for (int k = 0; k < config.negatives_per_pair; ++k) {
          const EntityId neg = noise.draw(rng);
          if (neg == p.context) continue;
          update(neg, 0.0);
        }
        for (std::size_t i = 0; i < d; ++i) u[i] += center_grad[i];
      });
    }

    if (!std::isfinite(epoch_loss) || !input.all_finite()) {
      throw NumericError("skip-gram diverged in epoch " + std::to_string(epoch) + " (learning rate " +
                         format_number(lr) + ")");
    }
  }

  return EmbeddingTable(std::vector<std::string>(vocab.begin(), vocab.end()), std::move(input), std::move(model),
                        config.hash());
}

}  // namespace litgraph
