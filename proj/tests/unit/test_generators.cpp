#include <gtest/gtest.h>

#include "sublin/exact.hpp"
#include "sublin/generators.hpp"
#include "sublin/graph_io.hpp"
#include "sublin/spectral.hpp"

using namespace sublin;

TEST(RandomRegular, CertifiedSmallGraph) {
  GenOptions opt;
  opt.phi_min = 0.1;
  auto c = gen_random_regular(8, 3, 5, opt);
  EXPECT_TRUE(c.graph.is_simple());
  for (Vertex v = 0; v < 8; ++v) EXPECT_EQ(c.graph.degree(v), 3U);
  EXPECT_TRUE(c.certificate.certified);
  EXPECT_GE(c.certificate.phi_lower, 0.1);
  EXPECT_NEAR(c.certificate.phi_lower, spectrum(c.graph).lambda2() / 2, 1e-9);
}

TEST(RandomRegular, ParityError) { EXPECT_THROW(gen_random_regular(7, 3, 1), ParameterError); }

TEST(RandomRegular, K4IsTheOnlyCubicGraphOnFour) {
  auto c = gen_random_regular(4, 3, 9);
  EXPECT_EQ(c.graph.m(), 6U);
  EXPECT_NEAR(c.certificate.phi_lower, 2.0 / 3, 1e-9);
}

TEST(RandomRegular, DeterministicInSeed) {
  EXPECT_EQ(graph_digest(gen_random_regular(64, 4, 11).graph), graph_digest(gen_random_regular(64, 4, 11).graph));
  EXPECT_NE(graph_digest(gen_random_regular(64, 4, 11).graph), graph_digest(gen_random_regular(64, 4, 12).graph));
}

TEST(PlantedMaxCut, ZeroCorruptionIsBipartite) {
  auto p = gen_planted_maxcut(12, 3, 0.0, 2);
  EXPECT_NEAR(exact_maxcut(p.graph).value, 1.0, 1e-15);
  EXPECT_EQ(p.violations, 0U);
}

TEST(PlantedMaxCut, SmallCorruption) {
  auto p = gen_planted_maxcut(16, 4, 0.05, 3);
  // Corruption swaps edge pairs, so the violation count is eps*m rounded to an even number.
  EXPECT_LE(static_cast<double>(p.violations), 0.05 * p.graph.m() + 1.0);
  EXPECT_GT(p.violations, 0U);
  EXPECT_GE(exact_maxcut(p.graph).value, 1.0 - static_cast<double>(p.violations) / p.graph.m() - 1e-12);
  EXPECT_EQ(p.violations, count_violations(p.graph, p.planted));
}

TEST(PlantedMaxCut, RandomRegularSoundnessCounterpart) {
  int below = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) below += exact_maxcut(gen_random_regular(20, 3, s).graph).value < 0.9;
  EXPECT_GE(below, 10);
}

TEST(PlantedLabels, ZeroCorruptionIsSatisfiable) {
  auto e = gen_planted_e2lin(8, 3, 2, 0.0, 4);
  EXPECT_NEAR(exact_opt_e2lin(e.graph), 1.0, 1e-15);
  auto u = gen_planted_ulc(8, 3, 2, 0.0, 4, {}, Completion::aligned);
  EXPECT_NEAR(exact_opt_ulc(u.graph), 1.0, 1e-15);
}

TEST(PlantedLabels, SmallCorruption) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto e = gen_planted_e2lin(8, 3, 2, 0.1, s);
    EXPECT_GE(exact_opt_e2lin(e.graph), 0.9);
    EXPECT_EQ(e.violations, count_violations(e.graph, e.planted));
  }
}

TEST(TwoCluster, CrossEdges) {
  auto p = gen_two_cluster(32, 4, 6, 1);
  std::size_t crossing = 0;
  for (const auto& e : p.graph.edges()) crossing += p.planted[e.u] != p.planted[e.v];
  EXPECT_EQ(crossing, 6U);
  EXPECT_THROW(gen_two_cluster(32, 4, 5, 1), ParameterError);
}

TEST(Hardness, GadgetsExhaustive) {
  EXPECT_TRUE(verify_equality_gadget());
  EXPECT_TRUE(verify_clause_gadget());
}

TEST(Hardness, SatisfiableSingleClause) {
  Cnf3 f;
  f.num_vars = 3;
  f.clauses.push_back({Literal{0, false}, Literal{1, false}, Literal{2, false}});
  auto h = gen_hardness_3col(f, 2, 3, 1);
  EXPECT_TRUE(exact_3colorable(h.graph));
  EXPECT_LE(h.graph.max_degree(), 3U + 6U);
  EXPECT_LE(h.graph.max_degree(), h.d_prime);
}

TEST(Hardness, UnsatisfiableFormulaIsNotColorable) {
  Cnf3 f;
  f.num_vars = 3;
  for (int s = 0; s < 8; ++s)
    f.clauses.push_back({Literal{0, (s & 1) != 0}, Literal{1, (s & 2) != 0}, Literal{2, (s & 4) != 0}});
  ASSERT_FALSE(sat_brute(f));
  auto h = gen_hardness_3col(f, 4, 3, 1);
  EXPECT_FALSE(hardness_3coloring(h, f).has_value());
  EXPECT_LE(h.graph.max_degree(), h.d_prime);
}

TEST(Hardness, StructuralDecisionMatchesGenericSearch) {
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    auto f = random_cnf(3, 2, 2, rng);
    auto h = gen_hardness_3col(f, 2, 3, 7 + i);
    auto c = hardness_3coloring(h, f);
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(is_proper_coloring(h.graph, *c));
    EXPECT_TRUE(exact_3colorable(h.graph));
  }
}

TEST(Hardness, LiteralBoundIsEnforced) {
  Cnf3 f;
  f.num_vars = 3;
  for (int i = 0; i < 3; ++i) f.clauses.push_back({Literal{0, false}, Literal{1, false}, Literal{2, false}});
  EXPECT_THROW(gen_hardness_3col(f, 2, 3, 1), ParameterError);
}
