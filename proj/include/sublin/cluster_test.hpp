#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublin/errors.hpp"
#include "sublin/oracle.hpp"
#include "sublin/parallel.hpp"
#include "sublin/rng.hpp"
#include "sublin/spectral.hpp"
#include "sublin/verdict.hpp"
#include "sublin/walks.hpp"

namespace sublin {

enum class ClusterVariant { exact, sublinear };

struct ClusterabilityParams {
  std::uint32_t k = 1;
  double lambda = 0.1;
  double eps_cond = 0.0;
  ClusterVariant variant = ClusterVariant::exact;
  double c1 = 1.0 / 480.0;
  SpectralLimits spectral{};

  // Sublinear variant: s = ceil(c_seeds (k+1) ln mu) seeds, walks of length
  // t = ceil(c_walk ln mu / lambda), Poi(R) endpoints per seed with
  // R = ceil(c_samples sqrt(mu)), and a pair counts as far when its distance
  // estimate exceeds theta (k+1)/mu.
  double c_seeds = 2.0;
  double c_walk = 1.0;
  double c_samples = 8.0;
  double theta = 1.0;
  std::size_t max_walk_length = 200000;
  unsigned jobs = 1;
};

inline void validate(const ClusterabilityParams& p) {
  if (!(p.lambda > 0)) throw ParameterError("lambda must be > 0");
  if (!(p.eps_cond >= 0)) throw ParameterError("conductance threshold must be >= 0");
  if (!(p.c1 > 0 && p.c1 < 1)) throw ParameterError("c1 must be in (0, 1)");
  if (p.eps_cond > p.c1 * p.lambda)
    throw ParameterError("infeasible: conductance threshold " + num(p.eps_cond) + " exceeds c1*lambda = " +
                         num(p.c1 * p.lambda));
}

struct SublinearClusterPlan {
  std::size_t seeds = 0;
  std::size_t walk_length = 0;
  double samples = 0;
  double far_threshold = 0;
};

inline SublinearClusterPlan plan_sublinear_cluster(const ClusterabilityParams& p, double mu) {
  SublinearClusterPlan s;
  const double lmu = std::log(std::max(mu, 2.0));
  s.seeds = static_cast<std::size_t>(std::ceil(p.c_seeds * (p.k + 1) * lmu));
  s.seeds = std::max<std::size_t>(s.seeds, p.k + 1);
  const double t = std::ceil(p.c_walk * lmu / p.lambda);
  if (t > static_cast<double>(p.max_walk_length))
    throw LimitError("walk length " + num(t) + " exceeds cap " + num(p.max_walk_length));
  s.walk_length = static_cast<std::size_t>(std::max(1.0, t));
  s.samples = std::ceil(p.c_samples * std::sqrt(mu));
  s.far_threshold = p.theta * (p.k + 1) / mu;
  return s;
}

namespace detail {

// True when some (size)-subset of the vertices 0..n-1 is pairwise adjacent in `far`.
inline bool has_clique(const std::vector<std::vector<char>>& far, std::size_t size) {
  const std::size_t n = far.size();
  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t)> grow = [&](std::size_t from) -> bool {
    if (chosen.size() == size) return true;
    for (std::size_t v = from; v < n; ++v) {
      bool ok = true;
      for (auto c : chosen)
        if (!far[c][v]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(v);
      if (grow(v + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return grow(0);
}

}  // namespace detail

// Accept iff lambda_{k+1} >= lambda (exact), or iff no k+1 sampled seeds have
// pairwise far walk distributions (sublinear).
template <AdjacencyOracle O>
Verdict test_clusterability(const O& oracle, const ClusterabilityParams& p, const Rng& rng) {
  validate(p);
  const std::uint64_t q0 = oracle.query_count();
  Verdict out;
  if (p.variant == ClusterVariant::exact) {
    if (oracle.num_vertices() > p.spectral.dense_limit) throw LimitError("exceeds brute-force limit (dense n)");
    if (p.k + 1 > oracle.num_vertices()) throw ParameterError("k+1 exceeds the vertex count");
    Graph g = materialize(oracle);
    auto prof = eigenvalues_symmetric(normalized_laplacian(g, p.spectral, false), p.spectral);
    const double lk1 = prof.eigenvalues[p.k];
    out.decision = lk1 >= p.lambda ? Decision::accept : Decision::reject;
    out.diagnostics = {{"variant", "exact"},   {"k", p.k},
                       {"lambda", p.lambda},   {"lambda_k_plus_1", lk1},
                       {"threshold", p.lambda}, {"eps_cond", p.eps_cond},
                       {"eigen_tolerance", prof.tolerance}, {"queries", oracle.query_count() - q0}};
    return out;
  }

  const double mu = static_cast<double>(oracle.volume());
  const auto plan = plan_sublinear_cluster(p, mu);
  Rng seed_rng = rng.substream("cluster-seeds");
  std::vector<Vertex> seeds(plan.seeds);
  for (auto& s : seeds) s = oracle.sample_degree_weighted(seed_rng);
  std::vector<std::map<Vertex, std::uint64_t>> tallies(plan.seeds);
  parallel_for(plan.seeds, p.jobs, [&](std::size_t a) {
    Rng wr = rng.substream("cluster-walks", a);
    const std::uint64_t k = wr.poisson(plan.samples);
    for (std::uint64_t j = 0; j < k; ++j) ++tallies[a][lazy_walk(oracle, seeds[a], plan.walk_length, wr).endpoint];
  });
  std::map<Vertex, double> inv_deg;
  for (const auto& t : tallies)
    for (const auto& [v, c] : t)
      if (!inv_deg.count(v)) inv_deg[v] = 1.0 / oracle.degree(v);
  const std::size_t s = plan.seeds;
  std::vector<std::vector<char>> far(s, std::vector<char>(s, 0));
  nlohmann::json dist = nlohmann::json::array();
  double max_est = -1e300, min_est = 1e300;
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a + 1; b < s; ++b) {
      double z = 0;
      auto ia = tallies[a].begin(), ib = tallies[b].begin();
      while (ia != tallies[a].end() || ib != tallies[b].end()) {
        Vertex v;
        double x = 0, y = 0;
        if (ib == tallies[b].end() || (ia != tallies[a].end() && ia->first < ib->first)) {
          v = ia->first;
          x = static_cast<double>(ia->second);
          ++ia;
        } else if (ia == tallies[a].end() || ib->first < ia->first) {
          v = ib->first;
          y = static_cast<double>(ib->second);
          ++ib;
        } else {
          v = ia->first;
          x = static_cast<double>(ia->second);
          y = static_cast<double>(ib->second);
          ++ia;
          ++ib;
        }
        z += ((x - y) * (x - y) - x - y) * inv_deg[v];
      }
      const double est = z / (plan.samples * plan.samples);
      max_est = std::max(max_est, est);
      min_est = std::min(min_est, est);
      far[a][b] = far[b][a] = est > plan.far_threshold;
    }
  const bool separated = detail::has_clique(far, p.k + 1);
  out.decision = separated ? Decision::reject : Decision::accept;
  out.diagnostics = {{"variant", "sublinear"},
                     {"k", p.k},
                     {"lambda", p.lambda},
                     {"eps_cond", p.eps_cond},
                     {"seeds", plan.seeds},
                     {"walk_length", plan.walk_length},
                     {"samples_per_seed", plan.samples},
                     {"threshold", plan.far_threshold},
                     {"max_pair_estimate", s > 1 ? max_est : 0.0},
                     {"min_pair_estimate", s > 1 ? min_est : 0.0},
                     {"queries", oracle.query_count() - q0}};
  return out;
}

}  // namespace sublin
