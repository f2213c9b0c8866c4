#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "litgraph/error.hpp"
#include "litgraph/kg_store.hpp"
#include "test_support.hpp"

namespace litgraph {
namespace {

using testing::random_graph;

TEST(ParseNTriples, SingleStatement) {
  const auto t = parse_ntriples("<urn:a> <urn:p> <urn:b> .\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0], (RawTriple{"urn:a", "urn:p", "urn:b"}));
}

TEST(ParseNTriples, SkipsCommentsAndBlankLines) {
  const auto t = parse_ntriples("# comment\n\n<urn:a> <urn:p> <urn:b> .");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].tail, "urn:b");
}

TEST(ParseNTriples, MalformedLineReportsLineNumber) {
  try {
    parse_ntriples("<urn:a> <urn:p>");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_ntriples("<urn:a> <urn:p> <urn:b> .\n\n<urn:a> <urn:p> <urn:c>\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseNTriples, LiteralsAndBlankNodes) {
  const auto t = parse_ntriples(
      "<urn:a> <urn:title> \"Beloved\"@en .\n"
      "<urn:a> <urn:lexile> \"870\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n"
      "_:b0 <urn:p> \"say \\\"hi\\\"\" .\n");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].tail, "\"Beloved\"@en");
  EXPECT_EQ(t[1].tail, "\"870\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  EXPECT_EQ(t[2].head, "_:b0");
  EXPECT_EQ(t[2].tail, "\"say \\\"hi\\\"\"");
}

TEST(ParseNTriples, LiteralSubjectRejected) {
  EXPECT_THROW(parse_ntriples("\"x\" <urn:p> <urn:b> ."), ParseError);
}

TEST(ParseTsv, Basic) {
  const auto t = parse_tsv_triples("A\tp\tB\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0], (RawTriple{"A", "p", "B"}));
  EXPECT_TRUE(parse_tsv_triples("").empty());
  EXPECT_THROW(parse_tsv_triples("A\tp"), ParseError);
  try {
    parse_tsv_triples("A\tp\tB\nA\tp\tB\tC\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(BuildGraph, DeduplicatesAndInternsInFirstAppearanceOrder) {
  const std::vector<RawTriple> raw{{"A", "p", "B"}, {"A", "p", "B"}};
  const auto g = KnowledgeGraph::build(raw);
  EXPECT_EQ(g.triple_count(), 1u);
  EXPECT_EQ(g.entity_count(), 2u);
  EXPECT_EQ(g.relation_count(), 1u);
  EXPECT_EQ(g.entity_label(0), "A");
  EXPECT_EQ(g.entity_label(1), "B");
}

TEST(BuildGraph, AdjacencyBothDirections) {
  const std::vector<RawTriple> raw{{"A", "p", "B"}, {"B", "q", "A"}};
  const auto g = KnowledgeGraph::build(raw);
  const auto a = *g.find_entity("A");
  const auto b = *g.find_entity("B");
  EXPECT_EQ(g.outgoing(a).size(), 1u);
  EXPECT_EQ(g.incoming(a).size(), 1u);
  EXPECT_EQ(g.outgoing(b).size(), 1u);
  EXPECT_EQ(g.incoming(b).size(), 1u);
  EXPECT_EQ(g.outgoing(a)[0].neighbor, b);
  EXPECT_FALSE(g.outgoing(a)[0].inverse);
  EXPECT_TRUE(g.incoming(a)[0].inverse);
}

TEST(BuildGraph, EmptyInputRejected) { EXPECT_THROW(KnowledgeGraph::build({}), InputError); }

TEST(BuildGraph, ResolveUnknownLabel) {
  const std::vector<RawTriple> raw{{"A", "p", "B"}};
  const auto g = KnowledgeGraph::build(raw);
  EXPECT_THROW(g.resolve({"A", "p", "Z"}), UnknownEntityError);
  EXPECT_THROW(g.resolve({"A", "nope", "B"}), UnknownEntityError);
  EXPECT_TRUE(g.contains(g.resolve({"A", "p", "B"})));
}

TEST(BuildGraph, AdjacencyConsistentWithEdgeSetOnRandomGraphs) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_graph(rng, 2 + rng.below(30), 1 + rng.below(4), 1 + rng.below(120));
    std::size_t out_total = 0, in_total = 0;
    for (EntityId e = 0; e < g.entity_count(); ++e) {
      for (const auto& inc : g.outgoing(e)) EXPECT_TRUE(g.contains({e, inc.relation, inc.neighbor}));
      for (const auto& inc : g.incoming(e)) EXPECT_TRUE(g.contains({inc.neighbor, inc.relation, e}));
      out_total += g.outgoing(e).size();
      in_total += g.incoming(e).size();
      EXPECT_GT(g.degree(e), 0u);
    }
    EXPECT_EQ(out_total, g.triple_count());
    EXPECT_EQ(in_total, g.triple_count());
    std::size_t per_relation = 0;
    for (RelationId r = 0; r < g.relation_count(); ++r) per_relation += g.relation_edges(r).size();
    EXPECT_EQ(per_relation, g.triple_count());
  }
}

TEST(BuildGraph, ParseRoundTripOnRandomGraphs) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_graph(rng, 2 + rng.below(25), 1 + rng.below(3), 1 + rng.below(80));
    std::ostringstream nt;
    write_ntriples(nt, g);
    const auto again = KnowledgeGraph::build(parse_ntriples(nt.str()));
    EXPECT_EQ(again.entity_labels(), g.entity_labels());
    EXPECT_EQ(again.relation_labels(), g.relation_labels());
    EXPECT_EQ(again.edges(), g.edges());

    std::ostringstream tsv;
    write_tsv_triples(tsv, g, g.edges());
    const auto from_tsv = KnowledgeGraph::build(parse_tsv_triples(tsv.str()));
    EXPECT_EQ(from_tsv.edges(), g.edges());
  }
}

TEST(BuildGraph, LiteralRoundTrip) {
  const std::string text =
      "<urn:a> <urn:title> \"Beloved\"@en .\n"
      "_:x <urn:p> \"7\"^^<urn:int> .\n";
  const auto g = KnowledgeGraph::build(parse_ntriples(text));
  std::ostringstream out;
  write_ntriples(out, g);
  EXPECT_EQ(out.str(), text);
}

TEST(SplitSizes, RoundingRule) {
  EXPECT_EQ(split_sizes(3303, {}), (std::array<std::size_t, 3>{2642, 330, 331}));
  EXPECT_EQ(split_sizes(10, {}), (std::array<std::size_t, 3>{8, 1, 1}));
  EXPECT_EQ(split_sizes(3, {}), (std::array<std::size_t, 3>{2, 0, 1}));
}

TEST(SplitEdges, RejectsBadRatiosAndTinyGraphs) {
  const std::vector<RawTriple> small{{"A", "p", "B"}, {"B", "p", "C"}};
  EXPECT_THROW(split_edges(KnowledgeGraph::build(small), {}, 1), InputError);
  const std::vector<RawTriple> raw{{"A", "p", "B"}, {"B", "p", "C"}, {"C", "p", "A"}};
  const auto g = KnowledgeGraph::build(raw);
  EXPECT_THROW(split_edges(g, {0.5, 0.2, 0.2}, 1), InputError);
  EXPECT_THROW(split_edges(g, {1.2, -0.1, -0.1}, 1), InputError);
}

TEST(SplitEdges, PartitionAndSizesOnRandomGraphs) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(rng, 3 + rng.below(40), 1 + rng.below(4), 3 + rng.below(200));
    if (g.triple_count() < 3) continue;
    const auto s = split_edges(g, {}, trial);
    const auto sizes = split_sizes(g.triple_count(), {});
    EXPECT_EQ(s.train.size(), sizes[0]);
    EXPECT_EQ(s.validation.size(), sizes[1]);
    EXPECT_EQ(s.test.size(), sizes[2]);
    TripleSet seen;
    for (const auto* part : {&s.train, &s.validation, &s.test}) {
      for (const auto& t : *part) {
        EXPECT_TRUE(g.contains(t));
        EXPECT_TRUE(seen.insert(t).second) << "edge in two parts";
      }
    }
    EXPECT_EQ(seen.size(), g.triple_count());
  }
}

TEST(SplitEdges, DeterministicPerSeed) {
  Rng rng(5);
  const auto g = random_graph(rng, 30, 3, 150);
  const auto a = split_edges(g, {}, 9);
  const auto b = split_edges(g, {}, 9);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.validation, b.validation);
  EXPECT_EQ(a.test, b.test);
  const auto c = split_edges(g, {}, 10);
  EXPECT_NE(a.train, c.train);
}

TEST(SplitEdges, RepairCoversEveryEntityWhenPossible) {
  Rng rng(13);
  int repaired_graphs = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(rng, 40, 2, 90);
    const auto s = split_edges(g, {}, trial);
    std::vector<int> cover(g.entity_count(), 0);
    for (const auto& t : s.train) cover[t.head] = cover[t.tail] = 1;
    std::set<EntityId> uncovered(s.uncovered.begin(), s.uncovered.end());
    for (EntityId e = 0; e < g.entity_count(); ++e) {
      if (!cover[e]) {
        EXPECT_TRUE(uncovered.count(e)) << "entity " << e << " silently missing from train";
      }
    }
    for (const auto e : s.uncovered) EXPECT_FALSE(cover[e]);
    repaired_graphs += s.uncovered.empty();
  }
  EXPECT_GT(repaired_graphs, 50);
}

TEST(SampleNegatives, SingleEdgeUniverse) {
  const std::vector<RawTriple> raw{{"A", "p", "B"}};
  const auto g = KnowledgeGraph::build(raw);
  const auto pos = g.edges();
  const auto neg = sample_negatives(g, pos, 5, 1);
  ASSERT_EQ(neg.negatives.size(), 5u);
  // Corruptions of (A,p,B) over {A,B} that change exactly one position.
  const std::set<Triple> universe{{1, 0, 1}, {0, 0, 0}};
  for (const auto& t : neg.negatives) EXPECT_TRUE(universe.count(t));
}

TEST(SampleNegatives, SaturatedRelationRaises) {
  const std::vector<RawTriple> raw{{"A", "p", "A"}, {"A", "p", "B"}, {"B", "p", "A"}, {"B", "p", "B"}};
  const auto g = KnowledgeGraph::build(raw);
  try {
    sample_negatives(g, g.edges(), 1, 1);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("(A, p, A)"), std::string::npos);
  }
}

TEST(SampleNegatives, PurityAndSingleCorruptionOnRandomGraphs) {
  Rng rng(17);
  std::size_t checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // At most 2 edges per node keeps every relation far from saturation.
    const auto nodes = 5 + rng.below(30);
    const auto g = random_graph(rng, nodes, 1 + rng.below(3), 3 + rng.below(2 * nodes));
    const auto s = split_edges(g, {}, trial);
    const auto neg = sample_negatives(g, s.train, 1 + static_cast<int>(rng.below(3)), trial);
    ASSERT_EQ(neg.negatives.size(), neg.source.size());
    for (std::size_t i = 0; i < neg.negatives.size(); ++i) {
      const auto& n = neg.negatives[i];
      const auto& p = s.train[neg.source[i]];
      EXPECT_FALSE(g.contains(n));
      EXPECT_EQ(n.relation, p.relation);
      EXPECT_EQ((n.head != p.head) + (n.tail != p.tail), 1);
      ++checked;
    }
  }
  EXPECT_GT(checked, 10000u);
}

TEST(SampleNegatives, DeterministicPerSeed) {
  Rng rng(19);
  const auto g = random_graph(rng, 30, 2, 100);
  const auto a = sample_negatives(g, g.edges(), 2, 5);
  const auto b = sample_negatives(g, g.edges(), 2, 5);
  EXPECT_EQ(a.negatives, b.negatives);
  EXPECT_THROW(sample_negatives(g, g.edges(), 0, 5), InputError);
}

TEST(SplitManifest, WriteReadRoundTrip) {
  Rng rng(23);
  const auto g = random_graph(rng, 20, 2, 60);
  const auto s = split_edges(g, {0.7, 0.2, 0.1}, 4);
  const auto dir = std::filesystem::temp_directory_path() / "litgraph_split_roundtrip";
  std::filesystem::remove_all(dir);
  write_split(dir, g, s);
  const auto back = read_split(dir, g);
  EXPECT_EQ(back.train, s.train);
  EXPECT_EQ(back.validation, s.validation);
  EXPECT_EQ(back.test, s.test);
  EXPECT_EQ(back.seed, 4u);
  EXPECT_DOUBLE_EQ(back.ratios.train, 0.7);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace litgraph
