#include "litgraph/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "litgraph/error.hpp"
#include "litgraph/rng.hpp"

namespace litgraph {

void SyntheticSpec::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(name) + " must be in [0, 1]");
  };
  prob(intra_probability, "intra_probability");
  prob(inter_probability, "inter_probability");
  prob(noise_probability, "noise_probability");
  if (community_count < 2) throw InputError("synthetic graph needs at least 2 communities");
  if (group_count < 1) throw InputError("synthetic graph needs at least one relevance group");
  if (entity_count <= tag_count) throw InputError("entity_count leaves no room for books");
  if (book_count() / community_count < group_count) {
    throw InputError("every community needs at least group_count books");
  }
  if (query_count < 1 || query_count > book_count()) throw InputError("query_count must be in [1, book count]");
  if (topology_relation.empty() || relevance_relation.empty() || noise_relation.empty()) {
    throw InputError("relation names must be non-empty");
  }
  if (topology_relation == relevance_relation || topology_relation == noise_relation ||
      relevance_relation == noise_relation) {
    throw InputError("relation roles must use distinct names");
  }
}

namespace {

std::string numbered(const std::string& prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, i);
  return prefix + buf;
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 0x5147));
  const std::size_t books = spec.book_count();
  const std::size_t c_count = spec.community_count;

  std::vector<std::string> book(books), tag(spec.tag_count);
  for (std::size_t i = 0; i < books; ++i) book[i] = numbered(spec.namespace_iri + "book/", i, 3);
  for (std::size_t i = 0; i < spec.tag_count; ++i) tag[i] = numbered(spec.namespace_iri + "tag/", i, 2);
  const std::string topo = spec.namespace_iri + spec.topology_relation;
  const std::string rel = spec.namespace_iri + spec.relevance_relation;
  const std::string noise = spec.namespace_iri + spec.noise_relation;

  // Contiguous blocks; the last community absorbs the remainder.
  const std::size_t block = books / c_count;
  std::vector<std::size_t> community(books), position(books), size(c_count, block);
  size.back() = books - block * (c_count - 1);
  for (std::size_t b = 0; b < books; ++b) {
    community[b] = std::min(b / block, c_count - 1);
    position[b] = b - community[b] * block;
  }

  SyntheticDataset out;
  for (std::size_t i = 0; i < books; ++i) {
    for (std::size_t j = i + 1; j < books; ++j) {
      const double u = rng.uniform();
      bool link = false;
      if (community[i] == community[j]) {
        const std::size_t m = size[community[i]];
        const std::size_t gap = position[j] - position[i];
        link = std::min(gap, m - gap) <= spec.locality && u < spec.intra_probability;
      } else {
        link = u < spec.inter_probability;
      }
      if (link) out.triples.push_back({book[i], topo, book[j]});
    }
  }

  std::vector<std::size_t> group_of(books);
  for (std::size_t c = 0; c < c_count; ++c) {
    std::vector<std::size_t> members(size[c]);
    std::iota(members.begin(), members.end(), c * block);
    rng.shuffle(members.begin(), members.end());
    for (std::size_t k = 0; k < members.size(); ++k) group_of[members[k]] = k % spec.group_count;
  }
  std::vector<std::vector<std::size_t>> groups(spec.group_count);
  for (std::size_t b = 0; b < books; ++b) groups[group_of[b]].push_back(b);
  std::vector<std::size_t> order(books);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());
  order.resize(spec.query_count);
  std::sort(order.begin(), order.end());
  for (const auto q : order) {
    for (const auto m : groups[group_of[q]]) {
      if (m == q) continue;
      out.ground_truth.emplace_back(book[q], book[m]);
      out.triples.push_back({book[q], rel, book[m]});
    }
  }

  for (std::size_t t = 0; t < spec.tag_count; ++t) {
    bool used = false;
    for (std::size_t b = 0; b < books; ++b) {
      if (rng.uniform() < spec.noise_probability) {
        out.triples.push_back({book[b], noise, tag[t]});
        used = true;
      }
    }
    // Keep every tag in the graph so the entity count matches the spec.
    if (!used) out.triples.push_back({book[rng.below(books)], noise, tag[t]});
  }

  out.candidates = book;
  out.community = community;
  return out;
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticSpec& spec, const SyntheticDataset& data) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw InputError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("graph.nt");
    write_ntriples(f, KnowledgeGraph::build(data.triples));
  }
  {
    auto f = open("ground_truth.tsv");
    for (const auto& [q, r] : data.ground_truth) f << q << '\t' << r << '\n';
  }
  {
    auto f = open("candidates.txt");
    for (const auto& c : data.candidates) f << c << '\n';
  }
  {
    auto f = open("relation_weights.tsv");
    f << "*\t1\n" << spec.namespace_iri << spec.relevance_relation << "\t5\n";
  }
}

}  // namespace litgraph
