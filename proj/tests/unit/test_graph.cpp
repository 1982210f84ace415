#include <sstream>

#include <gtest/gtest.h>

#include "sublin/graph.hpp"
#include "sublin/graph_io.hpp"
#include "sublin/oracle.hpp"
#include "stats.hpp"

using namespace sublin;

TEST(Degree, SmallGraphs) {
  Graph k2 = named::path(2);
  GraphOracle o(k2);
  EXPECT_EQ(o.degree(0), 1U);
  Graph c4 = named::cycle(4);
  EXPECT_EQ(GraphOracle(c4).degree(2), 2U);
  Graph p = named::petersen();
  GraphOracle po(p);
  for (Vertex v = 0; v < 10; ++v) EXPECT_EQ(po.degree(v), 3U);
}

TEST(Degree, InvalidVertexThrows) {
  Graph k2 = named::path(2);
  GraphOracle o(k2);
  EXPECT_THROW(o.degree(2), std::out_of_range);
  EXPECT_THROW(o.neighbor(0, 1), std::out_of_range);
}

TEST(Neighbor, PlainEdge) {
  Graph k2 = named::path(2);
  EXPECT_EQ(GraphOracle(k2).neighbor(0, 0).vertex, 1U);
}

TEST(Neighbor, E2LinOffsetIsInverted) {
  Graph g(2, {{0, 1, 2, {}}}, Annotation::e2lin, 3);
  GraphOracle o(g);
  EXPECT_EQ(o.neighbor(0, 0).vertex, 1U);
  EXPECT_EQ(o.neighbor(0, 0).shift, 2U);
  EXPECT_EQ(o.neighbor(1, 0).vertex, 0U);
  EXPECT_EQ(o.neighbor(1, 0).shift, 1U);
}

TEST(Neighbor, UlcPermutationIsInverted) {
  Graph g(2, {{0, 1, 0, {1, 0}}}, Annotation::ulc, 2);
  GraphOracle o(g);
  auto fwd = o.neighbor(0, 0);
  auto back = o.neighbor(1, 0);
  EXPECT_EQ(back.vertex, 0U);
  for (std::uint32_t i = 0; i < 2; ++i) EXPECT_EQ(back.perm[fwd.perm[i]], i);

  Graph h(2, {{0, 1, 0, {2, 0, 1}}}, Annotation::ulc, 3);
  GraphOracle oh(h);
  auto f3 = oh.neighbor(0, 0), b3 = oh.neighbor(1, 0);
  for (std::uint32_t i = 0; i < 3; ++i) EXPECT_EQ(b3.perm[f3.perm[i]], i);
}

TEST(Neighbor, SymmetryAndAnnotationConsistency) {
  Graph g(4, {{0, 1, 1, {}}, {1, 2, 4, {}}, {2, 3, 2, {}}, {3, 0, 3, {}}, {0, 2, 0, {}}}, Annotation::e2lin, 5);
  GraphOracle o(g);
  for (Vertex u = 0; u < 4; ++u)
    for (std::uint32_t i = 0; i < g.degree(u); ++i) {
      auto a = o.neighbor(u, i);
      bool found = false;
      for (std::uint32_t j = 0; j < g.degree(a.vertex); ++j) {
        auto b = o.neighbor(a.vertex, j);
        if (b.vertex == u && (a.shift + b.shift) % 5 == 0) found = true;
      }
      EXPECT_TRUE(found);
    }
}

TEST(Graph, RejectsBadInput) {
  EXPECT_THROW(Graph(3, {{0, 1, 0, {}}}), ParameterError);  // vertex 2 isolated
  EXPECT_THROW(Graph(2, {{0, 2, 0, {}}}), ParameterError);
  EXPECT_THROW(Graph(2, {{0, 1, 0, {0, 0}}}, Annotation::ulc, 2), ParameterError);
  EXPECT_THROW(Graph(2, {{0, 1, 0, {0}}}, Annotation::ulc, 2), ParameterError);
}

TEST(Sampling, DegreeWeightedFrequencies) {
  struct Case {
    Graph g;
    std::vector<double> probs;
  };
  std::vector<Case> cases = {{named::path(2), {0.5, 0.5}},
                             {named::star(3), {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6}},
                             {named::path(3), {0.25, 0.5, 0.25}}};
  for (auto mode : {SamplingMode::exact, SamplingMode::rejection})
    for (auto& c : cases) {
      GraphOracle o(c.g, mode);
      Rng rng(17);
      std::vector<std::uint64_t> counts(c.g.n(), 0);
      for (int i = 0; i < 100000; ++i) ++counts[o.sample_degree_weighted(rng)];
      EXPECT_LT(chi_square(counts, c.probs), chi_square_crit_01(static_cast<double>(c.g.n() - 1)));
    }
}

TEST(QueryCount, Accounting) {
  Graph c4 = named::cycle(4);
  GraphOracle o(c4);
  EXPECT_EQ(o.query_count(), 0U);
  o.degree(1);
  EXPECT_EQ(o.query_count(), 1U);
  for (int i = 0; i < 5; ++i) o.neighbor(0, i % 2);
  EXPECT_EQ(o.query_count(), 6U);
  Rng rng(1);
  o.sample_degree_weighted(rng);
  EXPECT_EQ(o.query_count(), 7U);
}

TEST(GraphIo, RoundTripAndDigest) {
  Graph g(3, {{0, 1, 0, {1, 0}}, {1, 2, 0, {0, 1}}, {0, 2, 0, {1, 0}}}, Annotation::ulc, 2);
  std::stringstream s;
  write_graph(s, g);
  Graph h = read_graph(s);
  EXPECT_EQ(graph_digest(g), graph_digest(h));
  EXPECT_EQ(h.kind(), Annotation::ulc);
  EXPECT_EQ(h.m(), 3U);
}

TEST(GraphIo, ErrorsNameTheLine) {
  std::stringstream s("graph 2 1\n0 5\n");
  try {
    read_graph(s);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2U);
  }
  std::stringstream bad_header("grph 2 1\n0 1\n");
  EXPECT_THROW(read_graph(bad_header), ParseError);
}
