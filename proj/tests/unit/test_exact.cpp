#include <cmath>

#include <gtest/gtest.h>

#include "sublin/exact.hpp"
#include "sublin/generators.hpp"
#include "sublin/spectral.hpp"

using namespace sublin;

TEST(NormalizedLaplacian, SmallGraphs) {
  auto k2 = normalized_laplacian(named::path(2));
  EXPECT_NEAR(k2(0, 0), 1, 1e-15);
  EXPECT_NEAR(k2(0, 1), -1, 1e-15);
  auto c4 = normalized_laplacian(named::cycle(4));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(c4(i, i), 1, 1e-15);
    EXPECT_NEAR(c4(i, (i + 1) % 4), -0.5, 1e-15);
    EXPECT_NEAR(c4(i, (i + 2) % 4), 0, 1e-15);
  }
  auto s3 = normalized_laplacian(named::star(3));
  for (int leaf = 1; leaf <= 3; ++leaf) EXPECT_NEAR(s3(0, leaf), -1 / std::sqrt(3.0), 1e-15);
}

TEST(Eigenvalues, KnownSpectra) {
  auto expect = [](const Graph& g, std::vector<double> want) {
    auto s = spectrum(g);
    ASSERT_EQ(s.eigenvalues.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(s.eigenvalues[i], want[i], 1e-9);
  };
  expect(named::path(2), {0, 2});
  expect(named::cycle(4), {0, 1, 1, 2});
  expect(named::complete(4), {0, 4.0 / 3, 4.0 / 3, 4.0 / 3});
}

TEST(Eigenvalues, JacobiAgreesWithEigenAboveCutoff) {
  auto g = gen_random_regular(64, 5, 3).graph;
  SpectralLimits jac;
  jac.jacobi_limit = 1000;
  SpectralLimits qr;
  qr.jacobi_limit = 1;
  auto a = spectrum(g, jac), b = spectrum(g, qr);
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) EXPECT_NEAR(a.eigenvalues[i], b.eigenvalues[i], 1e-9);
}

TEST(WalkDistributions, BaseCasesAndMasses) {
  auto p = named::petersen();
  auto d0 = exact_walk_distributions(p, 3, 0);
  EXPECT_DOUBLE_EQ(d0.even[3], 1.0);
  for (double x : d0.odd) EXPECT_EQ(x, 0.0);
  auto k2 = exact_walk_distributions(named::path(2), 0, 1);
  EXPECT_NEAR(k2.even[0], 0.5, 1e-15);
  EXPECT_NEAR(k2.even[1], 0.0, 1e-15);
  EXPECT_NEAR(k2.odd[1], 0.5, 1e-15);
  for (std::size_t t = 1; t <= 12; ++t) {
    auto d = exact_walk_distributions(named::barbell_triangles(), 2, t);
    double se = 0, so = 0;
    for (double x : d.even) se += x;
    for (double x : d.odd) so += x;
    EXPECT_NEAR(se, 0.5, 1e-12);
    EXPECT_NEAR(so, 0.5, 1e-12);
  }
}

TEST(Delta, KnownValues) {
  auto p = named::petersen();
  EXPECT_NEAR(exact_delta(p, 0, 0), 1.0 / 3, 1e-15);
  auto k2 = named::path(2);
  for (std::size_t t = 1; t <= 10; ++t) EXPECT_NEAR(exact_delta(k2, 0, t), 0.5, 1e-12);
}

TEST(Conductance, Profiles) {
  EXPECT_NEAR(exact_conductance(named::cycle(6)), 1.0 / 3, 1e-15);
  EXPECT_NEAR(exact_conductance(named::complete(4)), 2.0 / 3, 1e-15);
  EXPECT_NEAR(exact_conductance(named::path(2)), 1.0, 1e-15);
}

TEST(Rho, Examples) {
  EXPECT_NEAR(exact_rho(named::barbell_triangles(), 2), 1.0 / 7, 1e-15);
  EXPECT_NEAR(exact_rho(named::cycle(4), 2), 0.5, 1e-15);
  // k = 1: minimum over all nonempty S.
  auto g = named::petersen();
  EXPECT_NEAR(exact_rho(g, 1), 0.0, 1e-15);
}

TEST(Bipartiteness, Examples) {
  EXPECT_NEAR(exact_bipartiteness_ratio(named::cycle(6)), 0.0, 1e-15);
  EXPECT_NEAR(exact_bipartiteness_ratio(named::complete_bipartite(3, 3)), 0.0, 1e-15);
  EXPECT_NEAR(exact_bipartiteness_ratio(named::complete(3)), 1.0 / 3, 1e-15);
  EXPECT_NEAR(exact_bipartiteness_ratio(named::complete(4)), 1.0 / 3, 1e-15);
}

TEST(MaxCut, Examples) {
  EXPECT_NEAR(exact_maxcut(named::cycle(8)).value, 1.0, 1e-15);
  EXPECT_NEAR(exact_maxcut(named::complete(3)).value, 2.0 / 3, 1e-15);
  EXPECT_NEAR(exact_maxcut(named::petersen()).value, 12.0 / 15, 1e-15);
}

TEST(MaxCut, LimitIsEnforced) {
  BruteForceLimits lim;
  lim.maxcut_n = 5;
  EXPECT_THROW(exact_maxcut(named::cycle(6), lim), LimitError);
}

TEST(LabelOptimum, E2Lin) {
  Graph edge(2, {{0, 1, 1, {}}}, Annotation::e2lin, 2);
  EXPECT_NEAR(exact_opt_e2lin(edge), 1.0, 1e-15);
  Graph tri(3, {{0, 1, 1, {}}, {1, 2, 1, {}}, {2, 0, 1, {}}}, Annotation::e2lin, 2);
  EXPECT_NEAR(exact_opt_e2lin(tri), 2.0 / 3, 1e-15);
  auto planted = gen_planted_e2lin(8, 3, 3, 0.0, 4);
  EXPECT_NEAR(exact_opt_e2lin(planted.graph), 1.0, 1e-15);
}

TEST(LabelOptimum, Ulc) {
  std::vector<EdgeSpec> ids;
  auto c5 = named::cycle(5);
  for (const auto& e : c5.edges()) ids.push_back({e.u, e.v, 0, {0, 1, 2}});
  EXPECT_NEAR(exact_opt_ulc(Graph(5, ids, Annotation::ulc, 3)), 1.0, 1e-15);
  Graph edge(2, {{0, 1, 0, {2, 0, 1}}}, Annotation::ulc, 3);
  EXPECT_NEAR(exact_opt_ulc(edge), 1.0, 1e-15);
  std::vector<EdgeSpec> swaps;
  for (const auto& e : c5.edges()) swaps.push_back({e.u, e.v, 0, {1, 0}});
  EXPECT_NEAR(exact_opt_ulc(Graph(5, swaps, Annotation::ulc, 2)), 1.0 - 1.0 / 5, 1e-15);
}

TEST(Coloring, SmallGraphs) {
  EXPECT_TRUE(exact_3colorable(named::complete(3)));
  EXPECT_FALSE(exact_3colorable(named::complete(4)));
  auto c = exact_3coloring(named::petersen());
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(is_proper_coloring(named::petersen(), *c));
}

TEST(Coloring, RespectsPrecoloring) {
  auto g = named::cycle(4);
  std::vector<std::uint8_t> fixed = {0, 3, 1, 3};
  auto c = exact_3coloring(g, {}, fixed);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ((*c)[0], 0);
  EXPECT_EQ((*c)[2], 1);
  std::vector<std::uint8_t> clash = {0, 0, 3, 3};
  EXPECT_FALSE(exact_3coloring(g, {}, clash).has_value());
}

TEST(Sat, Brute) {
  Cnf3 f;
  f.num_vars = 3;
  f.clauses.push_back({Literal{0, false}, Literal{1, false}, Literal{2, false}});
  EXPECT_TRUE(sat_brute(f));
  Cnf3 all;
  all.num_vars = 3;
  for (int s = 0; s < 8; ++s)
    all.clauses.push_back({Literal{0, (s & 1) != 0}, Literal{1, (s & 2) != 0}, Literal{2, (s & 4) != 0}});
  EXPECT_FALSE(sat_brute(all));
}
