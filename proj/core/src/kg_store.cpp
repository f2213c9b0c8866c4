#include "litgraph/kg_store.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "litgraph/error.hpp"
#include "litgraph/rng.hpp"

namespace litgraph {

std::uint32_t Interner::intern(std::string_view label) {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<std::uint32_t> Interner::find(std::string_view label) const {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  return std::nullopt;
}

KnowledgeGraph KnowledgeGraph::build(std::span<const RawTriple> raw) {
  if (raw.empty()) throw InputError("cannot build a graph from an empty triple list");
  KnowledgeGraph g;
  g.edges_.reserve(raw.size());
  for (const auto& r : raw) {
    Triple t;
    t.head = g.entities_.intern(r.head);
    t.relation = g.relations_.intern(r.relation);
    t.tail = g.entities_.intern(r.tail);
    if (g.edge_set_.insert(t).second) g.edges_.push_back(t);
  }
  g.index_edges();
  return g;
}

KnowledgeGraph KnowledgeGraph::restricted_to(std::span<const Triple> edges) const {
  KnowledgeGraph g;
  g.entities_ = entities_;
  g.relations_ = relations_;
  for (const auto& t : edges) {
    if (t.head >= entity_count() || t.tail >= entity_count() || t.relation >= relation_count()) {
      throw InputError("restricted edge set references ids outside the graph");
    }
    if (g.edge_set_.insert(t).second) g.edges_.push_back(t);
  }
  g.index_edges();
  return g;
}

void KnowledgeGraph::index_edges() {
  const std::size_t n = entities_.size();
  const std::size_t r = relations_.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  rel_offsets_.assign(r + 1, 0);
  for (const auto& t : edges_) {
    ++out_offsets_[t.head + 1];
    ++in_offsets_[t.tail + 1];
    ++rel_offsets_[t.relation + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  std::partial_sum(rel_offsets_.begin(), rel_offsets_.end(), rel_offsets_.begin());

  out_adj_.resize(edges_.size());
  in_adj_.resize(edges_.size());
  rel_edges_.resize(edges_.size());
  auto out_pos = out_offsets_;
  auto in_pos = in_offsets_;
  auto rel_pos = rel_offsets_;
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& t = edges_[i];
    out_adj_[out_pos[t.head]++] = {t.tail, t.relation, false};
    in_adj_[in_pos[t.tail]++] = {t.head, t.relation, true};
    rel_edges_[rel_pos[t.relation]++] = i;
  }
}

std::span<const Incidence> KnowledgeGraph::outgoing(EntityId node) const {
  return std::span(out_adj_).subspan(out_offsets_.at(node), out_offsets_.at(node + 1) - out_offsets_[node]);
}

std::span<const Incidence> KnowledgeGraph::incoming(EntityId node) const {
  return std::span(in_adj_).subspan(in_offsets_.at(node), in_offsets_.at(node + 1) - in_offsets_[node]);
}

std::span<const std::uint32_t> KnowledgeGraph::relation_edges(RelationId relation) const {
  return std::span(rel_edges_).subspan(rel_offsets_.at(relation),
                                       rel_offsets_.at(relation + 1) - rel_offsets_[relation]);
}

Triple KnowledgeGraph::resolve(const RawTriple& raw) const {
  const auto h = find_entity(raw.head);
  const auto r = find_relation(raw.relation);
  const auto t = find_entity(raw.tail);
  if (!h) throw UnknownEntityError("unknown entity: " + raw.head);
  if (!r) throw UnknownEntityError("unknown relation: " + raw.relation);
  if (!t) throw UnknownEntityError("unknown entity: " + raw.tail);
  return {*h, *r, *t};
}

RawTriple KnowledgeGraph::labels_of(const Triple& t) const {
  return {entity_label(t.head), relation_label(t.relation), entity_label(t.tail)};
}

// ---------------------------------------------------------------------------
// Splits

std::array<std::size_t, 3> split_sizes(std::size_t edge_count, const SplitRatios& ratios) {
  // The epsilon keeps products such as 0.29 * 100 = 28.999... on the right side.
  const auto n = static_cast<double>(edge_count);
  auto train = static_cast<std::size_t>(std::floor(ratios.train * n + 1e-9));
  auto val = static_cast<std::size_t>(std::floor(ratios.validation * n + 1e-9));
  train = std::min(train, edge_count);
  val = std::min(val, edge_count - train);
  return {train, val, edge_count - train - val};
}

namespace {

void validate_ratios(const SplitRatios& r) {
  if (r.train < 0 || r.validation < 0 || r.test < 0 || !std::isfinite(r.train) ||
      !std::isfinite(r.validation) || !std::isfinite(r.test)) {
    throw InputError("split ratios must be finite and non-negative");
  }
  if (std::abs(r.train + r.validation + r.test - 1.0) > 1e-9) {
    throw InputError("split ratios must sum to 1");
  }
}

}  // namespace

DataSplit split_edges(const KnowledgeGraph& graph, const SplitRatios& ratios, std::uint64_t seed) {
  validate_ratios(ratios);
  const std::size_t n = graph.triple_count();
  if (n < 3) throw InputError("split requires at least 3 edges");

  std::vector<Triple> order = graph.edges();
  Rng rng(derive_seed(seed, 0x5EED5));
  rng.shuffle(order.begin(), order.end());

  const auto [n_train, n_val, n_test] = split_sizes(n, ratios);
  std::vector<Triple> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  // Held-out edges stay in one array during repair so val/test sizes are kept.
  std::vector<Triple> held(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

  std::vector<std::size_t> cover(graph.entity_count(), 0);
  auto add = [&](const Triple& t, int delta) {
    cover[t.head] = static_cast<std::size_t>(static_cast<long long>(cover[t.head]) + delta);
    if (t.tail != t.head) {
      cover[t.tail] = static_cast<std::size_t>(static_cast<long long>(cover[t.tail]) + delta);
    }
  };
  for (const auto& t : train) add(t, +1);

  DataSplit split;
  for (EntityId e = 0; e < graph.entity_count(); ++e) {
    if (cover[e] > 0 || graph.degree(e) == 0) continue;
    const auto held_it = std::find_if(held.begin(), held.end(),
                                      [e](const Triple& t) { return t.head == e || t.tail == e; });
    const auto train_it = std::find_if(train.begin(), train.end(), [&](const Triple& t) {
      return cover[t.head] >= 2 && cover[t.tail] >= 2;
    });
    if (held_it == held.end() || train_it == train.end()) {
      split.uncovered.push_back(e);
      continue;
    }
    add(*train_it, -1);
    add(*held_it, +1);
    std::swap(*train_it, *held_it);
  }

  split.train = std::move(train);
  split.validation.assign(held.begin(), held.begin() + static_cast<std::ptrdiff_t>(n_val));
  split.test.assign(held.begin() + static_cast<std::ptrdiff_t>(n_val), held.end());
  split.seed = seed;
  split.ratios = ratios;
  (void)n_test;
  return split;
}

// ---------------------------------------------------------------------------
// Negative sampling

NegativeSampleSet sample_negatives(const KnowledgeGraph& graph, std::span<const Triple> positives,
                                   int per_positive_ratio, std::uint64_t seed) {
  if (per_positive_ratio < 1) throw InputError("per_positive_ratio must be >= 1");
  const auto n_entities = graph.entity_count();
  if (n_entities == 0) throw InputError("cannot corrupt triples of an empty graph");

  NegativeSampleSet out;
  out.per_positive_ratio = per_positive_ratio;
  out.seed = seed;
  out.negatives.reserve(positives.size() * static_cast<std::size_t>(per_positive_ratio));
  out.source.reserve(out.negatives.capacity());

  Rng rng(derive_seed(seed, 0x4E6));
  for (std::size_t i = 0; i < positives.size(); ++i) {
    const Triple& pos = positives[i];
    for (int slot = 0; slot < per_positive_ratio; ++slot) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxCorruptionAttempts; ++attempt) {
        Triple cand = pos;
        const auto replacement = static_cast<EntityId>(rng.below(n_entities));
        if (rng.coin()) {
          cand.head = replacement;
        } else {
          cand.tail = replacement;
        }
        if (cand == pos || graph.contains(cand)) continue;
        out.negatives.push_back(cand);
        out.source.push_back(i);
        placed = true;
        break;
      }
      if (!placed) {
        const auto raw = graph.labels_of(pos);
        throw InputError("negative sampling saturated for positive (" + raw.head + ", " + raw.relation + ", " +
                         raw.tail + ") after " + std::to_string(kMaxCorruptionAttempts) + " attempts");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Split manifest

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError("malformed number in split manifest: " + std::string(s));
  }
  return v;
}

void write_part(const std::filesystem::path& path, const KnowledgeGraph& graph, std::span<const Triple> edges) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_tsv_triples(out, graph, edges);
}

std::vector<Triple> read_part(const std::filesystem::path& path, const KnowledgeGraph& graph) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open split file " + path.string());
  std::vector<Triple> out;
  for (const auto& raw : parse_tsv_triples(in)) out.push_back(graph.resolve(raw));
  return out;
}

}  // namespace

void write_split(const std::filesystem::path& dir, const KnowledgeGraph& graph, const DataSplit& split) {
  std::filesystem::create_directories(dir);
  write_part(dir / "train.tsv", graph, split.train);
  write_part(dir / "validation.tsv", graph, split.validation);
  write_part(dir / "test.tsv", graph, split.test);
  std::ofstream meta(dir / "split_manifest.tsv");
  if (!meta) throw InputError("cannot write split manifest in " + dir.string());
  meta << "seed\t" << split.seed << '\n'
       << "ratios\t" << format_double(split.ratios.train) << '\t' << format_double(split.ratios.validation) << '\t'
       << format_double(split.ratios.test) << '\n'
       << "train\ttrain.tsv\t" << split.train.size() << '\n'
       << "validation\tvalidation.tsv\t" << split.validation.size() << '\n'
       << "test\ttest.tsv\t" << split.test.size() << '\n';
}

DataSplit read_split(const std::filesystem::path& dir, const KnowledgeGraph& graph) {
  std::ifstream meta(dir / "split_manifest.tsv");
  if (!meta) throw InputError("missing split manifest in " + dir.string());
  DataSplit split;
  std::string line;
  while (std::getline(meta, line)) {
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "seed") {
      fields >> split.seed;
    } else if (key == "ratios") {
      std::string a, b, c;
      fields >> a >> b >> c;
      split.ratios = {parse_double(a), parse_double(b), parse_double(c)};
    }
  }
  split.train = read_part(dir / "train.tsv", graph);
  split.validation = read_part(dir / "validation.tsv", graph);
  split.test = read_part(dir / "test.tsv", graph);
  return split;
}

}  // namespace litgraph
