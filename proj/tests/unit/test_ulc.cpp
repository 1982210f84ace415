#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "sublin/generators.hpp"
#include "sublin/label_extended.hpp"
#include "sublin/ulc.hpp"

using namespace sublin;

TEST(Schedule, FirstStepIsHalfEps) {
  for (std::uint32_t q : {2U, 3U})
    for (double eps : {1e-3, 1e-40}) EXPECT_NEAR(f_schedule(2, q, eps, 0.1) / (eps / 2), 1.0, 1e-12);
}

TEST(Schedule, LastStepBelowPhiOverQ10) {
  for (std::uint32_t q : {2U, 3U})
    for (double phi : {0.05, 0.2}) {
      const double le = log_eps_hypothesis(q, phi);
      EXPECT_LT(log_f_schedule(q + 1, q, le, phi), std::log(phi) - 10 * std::log(static_cast<double>(q)));
    }
}

TEST(Schedule, AlphaExceedsSevenEps) {
  for (std::uint32_t q : {2U, 3U})
    for (double phi : {0.05, 0.2})
      for (double shift : {0.0, -10.0}) {
        const double le = log_eps_hypothesis(q, phi) + shift;
        for (std::uint32_t r = 2; r <= q; ++r)
          EXPECT_GT(log_f_schedule(r + 1, q, le, phi) - std::log(30.0 * r), std::log(7.0) + le);
      }
}

TEST(Schedule, RangeChecks) {
  EXPECT_THROW(log_f_schedule(1, 2, -1, 0.1), ParameterError);
  EXPECT_THROW(log_f_schedule(4, 2, -1, 0.1), ParameterError);
}

TEST(ReferenceOracle, RecoversDisjointCopies) {
  std::vector<EdgeSpec> e;
  auto c = gen_random_regular(12, 3, 1).graph;
  for (std::uint32_t k = 0; k < 3; ++k)
    for (const auto& x : c.edges()) e.push_back({x.u + 12 * k, x.v + 12 * k, 0, {}});
  Graph g(36, e);
  ReferenceClusteringOracle o(g, 3);
  for (std::uint32_t k = 0; k < 3; ++k)
    for (Vertex v = 1; v < 12; ++v) EXPECT_EQ(o.parts()[12 * k + v], o.parts()[12 * k]);
  EXPECT_NE(o.parts()[0], o.parts()[12]);
  EXPECT_NE(o.parts()[0], o.parts()[24]);
  EXPECT_NE(o.parts()[12], o.parts()[24]);
}

TEST(ReferenceOracle, SinglePart) {
  auto g = gen_random_regular(16, 3, 2).graph;
  ReferenceClusteringOracle o(g, 1);
  for (Vertex v = 0; v < 16; ++v) EXPECT_EQ(o.membership(v), 0U);
  EXPECT_EQ(o.query_count(), 16U);
}

TEST(ReferenceOracle, PlantedUlcSectionsAreRecovered) {
  GenOptions opt;
  opt.phi_min = 0.05;
  auto inst = gen_planted_ulc(512, 4, 2, 0.01, 3, opt);
  auto ext = materialize_extension(inst.graph);
  ReferenceClusteringOracle o(ext, 2);
  // Symmetric difference between each planted section and its best-matching part.
  double worst = 0;
  for (std::uint32_t label = 0; label < 2; ++label) {
    double best = 1e300;
    for (std::uint32_t part = 0; part < 2; ++part) {
      double diff = 0, vol = 0;
      for (Vertex v = 0; v < inst.graph.n(); ++v)
        for (std::uint32_t i = 0; i < 2; ++i) {
          const Vertex x = encode_label(v, i, 2);
          const bool in_c = (i == inst.planted[v]) == (label == 0);
          const bool in_hat = o.parts()[x] == part;
          vol += in_c ? ext.degree(x) : 0;
          diff += in_c != in_hat ? ext.degree(x) : 0;
        }
      best = std::min(best, diff / vol);
    }
    worst = std::max(worst, best);
  }
  RecordProperty("max_relative_symmetric_difference", std::to_string(worst));
  EXPECT_LE(worst, 0.1);
}

TEST(OuterConductance, ComponentHasZeroEta) {
  std::vector<EdgeSpec> e = {{0, 1, 0, {}}, {1, 2, 0, {}}, {0, 2, 0, {}}, {3, 4, 0, {}}, {4, 5, 0, {}}, {3, 5, 0, {}}};
  Graph g(6, e);
  GraphOracle o(g);
  FixedClusteringOracle parts({0, 0, 0, 1, 1, 1}, 2);
  Rng rng(1);
  auto est = test_outer_conductance(o, 2, 2, std::log(0.5), std::log(0.01), parts, 0, rng);
  EXPECT_EQ(est.eta, 0.0);
}

TEST(OuterConductance, HalfOfK2HasEtaOne) {
  Graph g = named::path(2);
  GraphOracle o(g);
  FixedClusteringOracle parts({0, 1}, 2);
  Rng rng(2);
  auto est = test_outer_conductance(o, 1, 2, std::log(0.5), std::log(0.01), parts, 0, rng);
  EXPECT_EQ(est.eta, 1.0);
}

TEST(OuterConductance, DegreeBoundIsChecked) {
  Graph g = named::star(3);
  GraphOracle o(g);
  FixedClusteringOracle parts({0, 0, 0, 0}, 1);
  Rng rng(3);
  EXPECT_THROW(test_outer_conductance(o, 1, 2, std::log(0.5), std::log(0.01), parts, 0, rng), ParameterError);
}

namespace {

UlcConfig ulc_config() {
  UlcConfig c;
  c.q = 2;
  c.d = 4;
  c.phi = 0.05;
  c.rho = 0.25;
  c.log_eps = log_eps_hypothesis(2, 0.05);
  return c;
}

}  // namespace

TEST(UlcTester, PlantedAcceptsRandomRejects) {
  GenOptions opt;
  opt.phi_min = 0.05;
  auto cfg = ulc_config();
  auto planted = gen_planted_ulc(128, 4, 2, 0.0, 5, opt);
  auto random = gen_planted_ulc(128, 4, 2, 1.0, 5, opt);
  GraphOracle a(planted.graph), b(random.graph);
  auto va = unique_label_cover_test(a, cfg, reference_factory(planted.graph), Rng(1));
  auto vb = unique_label_cover_test(b, cfg, reference_factory(random.graph), Rng(1));
  EXPECT_TRUE(va.accepted());
  EXPECT_FALSE(vb.accepted());
  EXPECT_EQ(va.diagnostics["queries"].get<std::uint64_t>(), a.query_count());
}

TEST(UlcTester, NoClusterInTheVolumeWindowRejects) {
  auto cfg = ulc_config();
  auto planted = gen_planted_ulc(64, 4, 2, 0.0, 5);
  GraphOracle o(planted.graph);
  const std::size_t np = 2 * planted.graph.n();
  ClusteringFactory lump = [np](std::uint32_t r, double, double) -> std::unique_ptr<ClusteringOracle> {
    return std::make_unique<FixedClusteringOracle>(std::vector<std::uint32_t>(np, 0), r);
  };
  auto v = unique_label_cover_test(o, cfg, lump, Rng(1));
  EXPECT_FALSE(v.accepted());
  EXPECT_FALSE(v.diagnostics["rounds"][0]["floor_ok"].get<bool>());
}

TEST(UlcTester, HypothesisIsEnforced) {
  auto cfg = ulc_config();
  cfg.log_eps = log_eps_hypothesis(2, 0.05) + 1;
  EXPECT_THROW(validate(cfg), ParameterError);
  cfg = ulc_config();
  cfg.rho = 1e-9;
  EXPECT_THROW(validate(cfg), ParameterError);
  cfg = ulc_config();
  cfg.q = 1;
  EXPECT_THROW(validate(cfg), ParameterError);
}
