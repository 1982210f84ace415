#include <cmath>

#include <gtest/gtest.h>

#include "sublin/dist_test.hpp"
#include "sublin/generators.hpp"
#include "sublin/oracle.hpp"

using namespace sublin;

namespace {

struct MeanSe {
  double mean, se;
};

template <class F>
MeanSe mean_of(int trials, F&& f) {
  double s = 0, s2 = 0;
  for (int i = 0; i < trials; ++i) {
    const double x = f(i);
    s += x;
    s2 += x * x;
  }
  const double m = s / trials;
  return {m, std::sqrt((s2 / trials - m * m) / trials)};
}

}  // namespace

TEST(CollisionStatistic, IdenticalDistributionsAreUnbiased) {
  Graph g = gen_random_regular(16, 3, 1).graph;
  GraphOracle o(g);
  auto uni = [&](Rng& r) { return static_cast<Vertex>(r.uniform(16)); };
  Rng base(7);
  auto ms = mean_of(1000, [&](int i) {
    Rng r = base.substream("trial", i);
    return l2_difference_statistic(uni, uni, o, 50, r).estimate;
  });
  EXPECT_LE(std::abs(ms.mean), 3 * ms.se);
}

TEST(CollisionStatistic, PointMassesAtDistanceTwo) {
  Graph g = named::path(2);
  GraphOracle o(g);
  auto pu = [](Rng&) { return Vertex{0}; };
  auto pw = [](Rng&) { return Vertex{1}; };
  Rng base(8);
  auto ms = mean_of(1000, [&](int i) {
    Rng r = base.substream("trial", i);
    return l2_difference_statistic(pu, pw, o, 50, r).estimate;
  });
  EXPECT_LE(std::abs(ms.mean - 2.0), 3 * ms.se + 1e-12);
}

TEST(CollisionStatistic, SamePointMassClosedForm) {
  Graph g = named::path(2);
  GraphOracle o(g);
  auto pu = [](Rng&) { return Vertex{0}; };
  for (int i = 0; i < 50; ++i) {
    Rng r = Rng(9).substream("trial", i);
    auto st = l2_difference_statistic(pu, pu, o, 20, r);
    if (st.aborted) continue;
    const double x = static_cast<double>(st.k_p), y = static_cast<double>(st.k_q);
    EXPECT_DOUBLE_EQ(st.estimate, ((x - y) * (x - y) - x - y) / 400.0);
  }
}

TEST(L2Test, AcceptsEqualDistributions) {
  Graph g = gen_random_regular(16, 3, 1).graph;
  GraphOracle o(g);
  auto uni = [&](Rng& r) { return static_cast<Vertex>(r.uniform(16)); };
  const double b = 1.0 / (16 * 3);
  int accepts = 0;
  for (int t = 0; t < 200; ++t)
    accepts += l2_difference_test(uni, uni, o, 0.01, 0.05, b, Rng(10).substream("trial", t)).accepted();
  EXPECT_GE(accepts, 190);
}

TEST(L2Test, RejectsFarPointMasses) {
  Graph g = named::path(2);
  GraphOracle o(g);
  auto pu = [](Rng&) { return Vertex{0}; };
  auto pw = [](Rng&) { return Vertex{1}; };
  int rejects = 0;
  for (int t = 0; t < 200; ++t)
    rejects += !l2_difference_test(pu, pw, o, 0.1, 0.05, 1.0, Rng(11).substream("trial", t)).accepted();
  EXPECT_GE(rejects, 190);
}

TEST(L2Test, GapRegionIsRecordedOnly) {
  Graph g = named::path(2);
  GraphOracle o(g);
  // p = (1/2 + a, 1/2 - a), q = (1/2 - a, 1/2 + a): distance 8a^2 = 2 xi.
  const double xi = 0.02, a = std::sqrt(2 * xi / 8);
  auto sp = [&](Rng& r) { return static_cast<Vertex>(r.uniform01() < 0.5 + a ? 0 : 1); };
  auto sq = [&](Rng& r) { return static_cast<Vertex>(r.uniform01() < 0.5 - a ? 0 : 1); };
  auto v = l2_difference_test(sp, sq, o, xi, 0.05, 1.0, Rng(12));
  EXPECT_TRUE(v.diagnostics.contains("median_estimate"));
}

TEST(L2Test, PlanAndBudget) {
  auto p = plan_l2_test(0.1, 0.05, 1.0, {});
  EXPECT_DOUBLE_EQ(p.r, 160.0);
  EXPECT_EQ(p.repetitions, static_cast<std::size_t>(std::ceil(12 * std::log(20.0))));
  EXPECT_THROW(plan_l2_test(0, 0.05, 1.0, {}), ParameterError);
  Graph g = named::path(2);
  GraphOracle o(g);
  auto pu = [](Rng&) { return Vertex{0}; };
  DistTestConfig cfg;
  cfg.max_samples = 100;
  EXPECT_THROW(l2_difference_test(pu, pu, o, 0.1, 0.05, 1.0, Rng(1), cfg), LimitError);
}

TEST(L2Test, DeterministicAcrossJobCounts) {
  Graph g = gen_random_regular(16, 3, 1).graph;
  auto uni = [&](Rng& r) { return static_cast<Vertex>(r.uniform(16)); };
  DistTestConfig one, four;
  four.jobs = 4;
  GraphOracle a(g), b(g);
  auto va = l2_difference_test(uni, uni, a, 0.01, 0.05, 1.0 / 48, Rng(5), one);
  auto vb = l2_difference_test(uni, uni, b, 0.01, 0.05, 1.0 / 48, Rng(5), four);
  EXPECT_EQ(va.diagnostics["median_estimate"], vb.diagnostics["median_estimate"]);
  EXPECT_EQ(a.query_count(), b.query_count());
}
