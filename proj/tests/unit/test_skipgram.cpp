#include <gtest/gtest.h>

#include <set>

#include "litgraph/error.hpp"
#include "litgraph/rng.hpp"
#include "litgraph/skipgram.hpp"

namespace litgraph {
namespace {

WalkCorpus corpus_of(std::vector<std::vector<EntityId>> walks, std::size_t vocab) {
  WalkCorpus c;
  c.walks = std::move(walks);
  c.vocab_size = vocab;
  return c;
}

std::set<std::pair<EntityId, EntityId>> pair_set(const std::vector<ContextPair>& pairs) {
  std::set<std::pair<EntityId, EntityId>> out;
  for (const auto& p : pairs) out.insert({p.center, p.context});
  return out;
}

TEST(ExtractPairs, WindowOne) {
  const auto pairs = extract_pairs(corpus_of({{0, 1, 2}}, 3), 1);
  EXPECT_EQ(pairs.size(), 4u);
  EXPECT_EQ(pair_set(pairs), (std::set<std::pair<EntityId, EntityId>>{{0, 1}, {1, 0}, {1, 2}, {2, 1}}));
}

TEST(ExtractPairs, SingletonWalkHasNoPairs) {
  EXPECT_TRUE(extract_pairs(corpus_of({{0}}, 1), 5).empty());
}

TEST(ExtractPairs, WindowTwo) {
  const auto pairs = extract_pairs(corpus_of({{0, 1, 2}}, 3), 2);
  EXPECT_EQ(pairs.size(), 6u);
  const auto s = pair_set(pairs);
  EXPECT_TRUE(s.count({0, 2}));
  EXPECT_TRUE(s.count({2, 0}));
  EXPECT_THROW(extract_pairs(corpus_of({{0, 1}}, 2), 0), InputError);
}

TEST(NoiseDistribution, Examples) {
  std::vector<EntityId> walk(16, 0);
  walk.push_back(1);
  const auto p = noise_distribution(corpus_of({walk}, 2));
  EXPECT_NEAR(p[0], 8.0 / 9.0, 1e-12);
  EXPECT_NEAR(p[1], 1.0 / 9.0, 1e-12);

  const auto uniform = noise_distribution(corpus_of({{0, 1, 2, 3}}, 4));
  for (const double q : uniform) EXPECT_NEAR(q, 0.25, 1e-12);

  const auto single = noise_distribution(corpus_of({{0}}, 1));
  EXPECT_DOUBLE_EQ(single[0], 1.0);
}

std::vector<double> random_vector(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

TEST(SgnsGradient, MatchesFiniteDifferencesAtRandomPoints) {
  Rng rng(41);
  const std::size_t d = 8, k = 3;
  for (int point = 0; point < 20; ++point) {
    const auto u = random_vector(rng, d);
    const auto v = random_vector(rng, d);
    DenseMatrix neg(k, d);
    for (auto& x : neg.values()) x = rng.uniform(-1.0, 1.0);
    const auto grad = sgns_pair_gradient(u, v, neg);

    const auto wrt_u = finite_difference_check(
        [&](std::span<const double> x) { return sgns_pair_loss(x, v, neg); }, u, grad.center, 1e-5);
    EXPECT_LE(wrt_u.max_relative_error, 1e-4);

    const auto wrt_v = finite_difference_check(
        [&](std::span<const double> x) { return sgns_pair_loss(u, x, neg); }, v, grad.context, 1e-5);
    EXPECT_LE(wrt_v.max_relative_error, 1e-4);

    std::vector<double> flat(neg.values().begin(), neg.values().end());
    const auto wrt_neg = finite_difference_check(
        [&](std::span<const double> x) {
          DenseMatrix m(k, d);
          std::copy(x.begin(), x.end(), m.values().begin());
          return sgns_pair_loss(u, v, m);
        },
        flat, grad.negatives.values(), 1e-5);
    EXPECT_LE(wrt_neg.max_relative_error, 1e-4);
  }
}

std::vector<std::string> labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

// Two disjoint triangles {0,1,2} and {3,4,5}, walked exhaustively.
WalkCorpus two_cliques() {
  Rng rng(43);
  std::vector<std::vector<EntityId>> walks;
  for (int w = 0; w < 200; ++w) {
    for (EntityId base : {0u, 3u}) {
      std::vector<EntityId> walk{base + static_cast<EntityId>(rng.below(3))};
      while (walk.size() < 10) {
        EntityId next;
        do next = base + static_cast<EntityId>(rng.below(3));
        while (next == walk.back());
        walk.push_back(next);
      }
      walks.push_back(std::move(walk));
    }
  }
  return corpus_of(std::move(walks), 6);
}

TEST(TrainSkipgram, TwoCliquesSeparate) {
  SkipGramConfig cfg;
  cfg.dimension = 16;
  cfg.window = 2;
  cfg.epochs = 5;
  cfg.seed = 7;
  const auto table = train_skipgram(two_cliques(), cfg, labels(6));
  EXPECT_GT(cosine_similarity(table.vector(0), table.vector(1)), cosine_similarity(table.vector(0), table.vector(3)));

  double intra = 0, inter = 0;
  int n_intra = 0, n_inter = 0;
  for (EntityId a = 0; a < 6; ++a) {
    for (EntityId b = a + 1; b < 6; ++b) {
      const double c = cosine_similarity(table.vector(a), table.vector(b));
      if ((a < 3) == (b < 3)) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  EXPECT_GT(intra / n_intra, inter / n_inter);
  for (const double x : table.vectors().values()) EXPECT_TRUE(std::isfinite(x));
  EXPECT_EQ(table.dimension(), 16u);
}

TEST(TrainSkipgram, ZeroEpochsKeepsInitialization) {
  SkipGramConfig cfg;
  cfg.dimension = 10;
  cfg.epochs = 0;
  const auto table = train_skipgram(two_cliques(), cfg, labels(6));
  const double bound = 0.5 / 10;
  bool any_nonzero = false;
  for (const double x : table.vectors().values()) {
    EXPECT_GE(x, -bound);
    EXPECT_LE(x, bound);
    any_nonzero |= x != 0.0;
  }
  EXPECT_TRUE(any_nonzero);
}

TEST(TrainSkipgram, Deterministic) {
  SkipGramConfig cfg;
  cfg.dimension = 8;
  cfg.epochs = 2;
  cfg.seed = 99;
  const auto corpus = two_cliques();
  const auto a = train_skipgram(corpus, cfg, labels(6));
  const auto b = train_skipgram(corpus, cfg, labels(6));
  EXPECT_EQ(a.vectors(), b.vectors());
  EXPECT_EQ(a.config_hash(), b.config_hash());
  cfg.seed = 100;
  EXPECT_NE(a.vectors(), train_skipgram(corpus, cfg, labels(6)).vectors());
}

TEST(TrainSkipgram, DivergenceNamesEpochAndRate) {
  SkipGramConfig cfg;
  cfg.dimension = 4;
  cfg.epochs = 3;
  cfg.learning_rate = 1e300;
  try {
    train_skipgram(two_cliques(), cfg, labels(6));
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("epoch"), std::string::npos);
    EXPECT_NE(msg.find("learning rate"), std::string::npos);
  }
}

TEST(TrainSkipgram, RejectsBadInputs) {
  SkipGramConfig cfg;
  cfg.dimension = 1;
  EXPECT_THROW(train_skipgram(two_cliques(), cfg, labels(6)), InputError);
  cfg.dimension = 4;
  EXPECT_THROW(train_skipgram(two_cliques(), cfg, labels(3)), InputError);
  EXPECT_THROW(train_skipgram(corpus_of({}, 6), cfg, labels(6)), InputError);
}

}  // namespace
}  // namespace litgraph
