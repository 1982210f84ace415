#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sublin/errors.hpp"
#include "sublin/oracle.hpp"
#include "sublin/parallel.hpp"
#include "sublin/rng.hpp"
#include "sublin/verdict.hpp"

namespace sublin {

struct CollisionStatistic {
  double z = 0;
  std::uint64_t k_p = 0;  // Poisson draw for the p side
  std::uint64_t k_q = 0;  // independent Poisson draw for the q side
  bool aborted = false;
  double estimate = 0;
  std::size_t distinct = 0;
};

// Both sides draw their own Poi(r) sample count, so the tallies X_v and Y_v
// are independent Poisson variables and E[Z] = r^2 ||(p-q) D^{-1/2}||^2.
template <AdjacencyOracle O, class SamplerP, class SamplerQ>
CollisionStatistic l2_difference_statistic(SamplerP&& sample_p, SamplerQ&& sample_q, const O& oracle, double r,
                                           Rng& rng) {
  if (r < 1) throw ParameterError("r must be >= 1");
  CollisionStatistic st;
  st.k_p = rng.poisson(r);
  st.k_q = rng.poisson(r);
  if (static_cast<double>(std::max(st.k_p, st.k_q)) > 8.0 * r) {
    st.aborted = true;
    return st;
  }
  std::unordered_map<Vertex, std::pair<std::uint64_t, std::uint64_t>> tally;
  tally.reserve(2 * (st.k_p + st.k_q));
  for (std::uint64_t i = 0; i < st.k_p; ++i) ++tally[sample_p(rng)].first;
  for (std::uint64_t i = 0; i < st.k_q; ++i) ++tally[sample_q(rng)].second;
  // Sum in vertex order so the result does not depend on hash layout.
  std::vector<std::pair<Vertex, std::pair<std::uint64_t, std::uint64_t>>> rows(tally.begin(), tally.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double z = 0;
  for (const auto& [v, xy] : rows) {
    const double x = static_cast<double>(xy.first), y = static_cast<double>(xy.second);
    z += ((x - y) * (x - y) - x - y) / oracle.degree(v);
  }
  st.z = z;
  st.estimate = z / (r * r);
  st.distinct = rows.size();
  return st;
}

struct DistTestConfig {
  double c_dist = 16.0;
  double c_rep = 12.0;
  unsigned jobs = 1;
  // Upper bound on r * repetitions; 0 disables the check.
  double max_samples = 0;
};

struct DistTestPlan {
  double r = 0;
  std::size_t repetitions = 0;
};

inline DistTestPlan plan_l2_test(double xi, double delta, double b_bound, const DistTestConfig& cfg) {
  if (!(xi > 0)) throw ParameterError("xi must be > 0");
  if (!(delta > 0 && delta < 1)) throw ParameterError("delta must be in (0, 1)");
  if (!(b_bound > 0)) throw ParameterError("b must be > 0");
  DistTestPlan p;
  p.r = std::ceil(cfg.c_dist * std::sqrt(b_bound) / xi);
  p.repetitions = static_cast<std::size_t>(std::max(1.0, std::ceil(cfg.c_rep * std::log(1.0 / delta))));
  return p;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Accepts (distributions close) iff the median of the repeated estimates is at most 2 xi.
// Each repetition owns the sub-stream rng.substream("rep", j).
template <AdjacencyOracle O, class SamplerP, class SamplerQ>
Verdict l2_difference_test(SamplerP&& sample_p, SamplerQ&& sample_q, const O& oracle, double xi, double delta,
                           double b_bound, const Rng& rng, const DistTestConfig& cfg = {}) {
  const auto plan = plan_l2_test(xi, delta, b_bound, cfg);
  if (cfg.max_samples > 0 && plan.r * static_cast<double>(plan.repetitions) > cfg.max_samples)
    throw LimitError("sample budget exceeded: r=" + num(plan.r) +
                     " repetitions=" + num(plan.repetitions));
  std::vector<double> est(plan.repetitions);
  std::vector<std::uint64_t> aborts(plan.repetitions, 0);
  parallel_for(plan.repetitions, cfg.jobs, [&](std::size_t j) {
    Rng sub = rng.substream("rep", j);
    for (;;) {
      auto st = l2_difference_statistic(sample_p, sample_q, oracle, plan.r, sub);
      if (!st.aborted) {
        est[j] = st.estimate;
        return;
      }
      ++aborts[j];
    }
  });
  const double med = median(est);
  Verdict v;
  v.decision = med <= 2.0 * xi ? Decision::accept : Decision::reject;
  std::uint64_t total_aborts = 0;
  for (auto a : aborts) total_aborts += a;
  v.diagnostics = {{"r", plan.r},
                   {"repetitions", plan.repetitions},
                   {"median_estimate", med},
                   {"threshold", 2.0 * xi},
                   {"xi", xi},
                   {"delta", delta},
                   {"b_bound", b_bound},
                   {"aborted_runs", total_aborts},
                   {"estimates", est},
                   {"queries", oracle.query_count()}};
  return v;
}

}  // namespace sublin
