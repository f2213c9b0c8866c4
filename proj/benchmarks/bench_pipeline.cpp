#include <benchmark/benchmark.h>

#include <numeric>

#include "litgraph/evaluation.hpp"
#include "litgraph/rgcn.hpp"
#include "litgraph/rng.hpp"
#include "litgraph/skipgram.hpp"
#include "litgraph/synth.hpp"
#include "litgraph/walk_engine.hpp"

namespace {

using namespace litgraph;

struct Bench {
  KnowledgeGraph graph;
  DataSplit split;
  RelationWeights weights;

  static const Bench& get() {
    static const Bench b = [] {
      SyntheticSpec spec;
      const auto data = generate_synthetic(spec);
      Bench out{KnowledgeGraph::build(data.triples), {}, RelationWeights(1.0)};
      out.split = split_edges(out.graph, {}, 1);
      out.weights.set(*out.graph.find_relation(spec.namespace_iri + spec.relevance_relation), 5.0);
      return out;
    }();
    return b;
  }
};

void BM_UniformWalks(benchmark::State& state) {
  const auto& b = Bench::get();
  const WalkConfig cfg{10, static_cast<int>(state.range(0)), 1};
  std::size_t steps = 0;
  for (auto _ : state) {
    const auto corpus = generate_uniform_walks(b.graph, cfg);
    for (const auto& w : corpus.walks) steps += w.size();
    benchmark::DoNotOptimize(corpus.walks.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_UniformWalks)->Arg(10)->Arg(40)->Arg(80);

void BM_BiasedWalks(benchmark::State& state) {
  const auto& b = Bench::get();
  const WalkConfig cfg{10, 40, 1};
  for (auto _ : state) {
    auto corpus = generate_biased_walks(b.graph, cfg, b.weights);
    benchmark::DoNotOptimize(corpus.walks.data());
  }
}
BENCHMARK(BM_BiasedWalks);

void BM_SkipGramEpoch(benchmark::State& state) {
  const auto& b = Bench::get();
  const auto corpus = generate_uniform_walks(b.graph, {10, 40, 1});
  SkipGramConfig cfg;
  cfg.dimension = static_cast<int>(state.range(0));
  cfg.epochs = 1;
  for (auto _ : state) {
    auto table = train_skipgram(corpus, cfg, b.graph.entity_labels());
    benchmark::DoNotOptimize(table.vectors().values().data());
  }
}
BENCHMARK(BM_SkipGramEpoch)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RgcnLossAndGradient(benchmark::State& state) {
  const auto& b = Bench::get();
  RgcnConfig cfg;
  cfg.hidden_dim = static_cast<int>(state.range(0));
  const RgcnGraph messages(b.graph.entity_count(), b.graph.relation_count(), b.split.train);
  const auto params = RgcnParameters::initialize(b.graph.entity_count(), b.graph.relation_count(), cfg);
  const auto negatives = sample_negatives(b.graph, b.split.train, 1, 3).negatives;
  auto grad = params.zeros_like();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rgcn_loss(messages, params, cfg.weight_decay, b.split.train, negatives, &grad));
  }
}
BENCHMARK(BM_RgcnLossAndGradient)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RankCandidates(benchmark::State& state) {
  const auto& b = Bench::get();
  Rng rng(5);
  DenseMatrix m(b.graph.entity_count(), 64);
  for (auto& x : m.values()) x = rng.uniform(-1, 1);
  const EmbeddingTable table(b.graph.entity_labels(), m, "bench");
  std::vector<EntityId> all(b.graph.entity_count());
  std::iota(all.begin(), all.end(), 0u);
  EntityId q = 0;
  for (auto _ : state) {
    auto list = rank_candidates(table, q, all, 10);
    benchmark::DoNotOptimize(list.entries.data());
    q = (q + 1) % static_cast<EntityId>(all.size());
  }
}
BENCHMARK(BM_RankCandidates);

void BM_Auc(benchmark::State& state) {
  Rng rng(6);
  std::vector<double> pos(static_cast<std::size_t>(state.range(0))), neg(pos.size());
  for (auto& x : pos) x = rng.uniform();
  for (auto& x : neg) x = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(auc(pos, neg).auc);
}
BENCHMARK(BM_Auc)->Arg(330)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
