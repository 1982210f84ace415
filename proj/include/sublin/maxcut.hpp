#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "sublin/dist_test.hpp"
#include "sublin/errors.hpp"
#include "sublin/oracle.hpp"
#include "sublin/rng.hpp"
#include "sublin/verdict.hpp"
#include "sublin/walks.hpp"

namespace sublin {

enum class VolumeMode { exact, estimated };

struct MaxCutConfig {
  double phi = 0.1;
  double eps = 0.0;
  double rho = 0.4;
  double c_mc = 0.019;
  // eps must not exceed c_mc * phi^2 * rho / feasibility.
  double feasibility = 16.0;
  std::size_t start_vertices = 16;
  VolumeMode volume_mode = VolumeMode::exact;
  double volume_estimate = 0;  // used in estimated mode
  // Refuse to start when the projected query count exceeds this; 0 disables.
  double max_queries = 2e9;
  DistTestConfig dist{};
};

struct MaxCutPlan {
  double mu = 0;
  std::size_t walk_length = 0;
  double xi = 0;
  double b_bound = 0;
  double delta = 0;
  double exponent = 0;  // eps / (2 C phi^2 rho)
  DistTestPlan dist;
};

inline void validate(const MaxCutConfig& c) {
  if (!(c.phi > 0 && c.phi < 1)) throw ParameterError("phi must be in (0, 1)");
  if (!(c.rho > 0 && c.rho < 1)) throw ParameterError("rho must be in (0, 1)");
  if (!(c.eps >= 0 && c.eps < 1)) throw ParameterError("eps must be in [0, 1)");
  if (!(c.c_mc > 0)) throw ParameterError("C must be > 0");
  if (c.start_vertices < 1) throw ParameterError("need at least one start vertex");
  const double cap = c.c_mc * c.phi * c.phi * c.rho / c.feasibility;
  if (c.eps > cap)
    throw ParameterError("infeasible: eps=" + num(c.eps) + " exceeds C*phi^2*rho/" +
                         num(c.feasibility) + "=" + num(cap));
  if (c.volume_mode == VolumeMode::estimated && !(c.volume_estimate > 0))
    throw ParameterError("estimated volume mode needs a positive estimate");
}

// Walk length, threshold and inner-test parameters for a graph of volume mu on n vertices.
inline MaxCutPlan plan_maxcut(const MaxCutConfig& c, double mu, std::size_t n) {
  validate(c);
  MaxCutPlan p;
  // In estimated mode the true volume is only known within [mu_hat/2, 2 mu_hat]:
  // walk for the upper end, compare against the threshold of the upper end,
  // and bound norms by the lower end.
  const double mu_hi = c.volume_mode == VolumeMode::exact ? mu : 2.0 * c.volume_estimate;
  const double mu_lo = c.volume_mode == VolumeMode::exact ? mu : 0.5 * c.volume_estimate;
  p.mu = mu;
  const double denom = c.c_mc * c.phi * c.phi * c.rho;
  p.walk_length = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(mu_hi) / (16.0 * denom))));
  p.exponent = c.eps / (2.0 * denom);
  p.xi = 1.0 / (3600.0 * std::pow(mu_hi, 1.0 + p.exponent));
  p.b_bound = 4.0 / mu_lo;
  p.delta = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  p.dist = plan_l2_test(p.xi, p.delta, p.b_bound, c.dist);
  return p;
}

// Expected oracle queries of one inner test: two sides of r samples, each
// costing about two parity attempts of up to 2l queries, plus degree lookups.
inline double projected_queries_per_seed(const MaxCutPlan& p) {
  const double per_stat = 2.0 * p.dist.r * (2.0 * 2.0 * static_cast<double>(p.walk_length) + 1.0);
  return per_stat * static_cast<double>(p.dist.repetitions);
}

// Hard cap used by tests: at most 4 parity attempts per sample on average,
// at most 8r samples per side, and twice the repetitions for aborted re-draws.
inline double maxcut_query_cap(const MaxCutPlan& p, std::size_t start_vertices) {
  const double per_stat = 2.0 * 8.0 * p.dist.r * (4.0 * 2.0 * static_cast<double>(p.walk_length) + 1.0);
  return static_cast<double>(start_vertices) * (1.0 + 2.0 * static_cast<double>(p.dist.repetitions) * per_stat);
}

template <AdjacencyOracle O>
Verdict test_expander_maxcut(const O& oracle, const MaxCutConfig& cfg, const Rng& rng) {
  const std::uint64_t q0 = oracle.query_count();
  const auto plan = plan_maxcut(cfg, static_cast<double>(oracle.volume()), oracle.num_vertices());
  const double projected = projected_queries_per_seed(plan) * static_cast<double>(cfg.start_vertices);
  if (cfg.max_queries > 0 && projected > cfg.max_queries)
    throw LimitError("projected queries " + num(projected) + " exceed budget " +
                     num(cfg.max_queries) + " (walk length " + num(plan.walk_length) +
                     ", r " + num(plan.dist.r) + ")");
  Rng seeds_rng = rng.substream("seeds");
  nlohmann::json per_seed = nlohmann::json::array();
  Decision decision = Decision::reject;
  for (std::size_t s = 0; s < cfg.start_vertices; ++s) {
    const Vertex v = oracle.sample_degree_weighted(seeds_rng);
    const std::size_t len = plan.walk_length;
    auto even = [&](Rng& r) { return sample_parity_conditioned(oracle, v, len, Parity::even, r); };
    auto odd = [&](Rng& r) { return sample_parity_conditioned(oracle, v, len, Parity::odd, r); };
    auto inner = l2_difference_test(even, odd, oracle, plan.xi, plan.delta, plan.b_bound,
                                    rng.substream("dist", s), cfg.dist);
    per_seed.push_back({{"vertex", v},
                        {"median_estimate", inner.diagnostics["median_estimate"]},
                        {"close", inner.accepted()},
                        {"aborted_runs", inner.diagnostics["aborted_runs"]}});
    if (!inner.accepted()) {
      decision = Decision::accept;
      break;
    }
  }
  Verdict out;
  out.decision = decision;
  out.diagnostics = {{"walk_length", plan.walk_length},
                     {"xi_trm", plan.xi},
                     {"threshold", 2.0 * plan.xi},
                     {"b_bound", plan.b_bound},
                     {"delta", plan.delta},
                     {"r", plan.dist.r},
                     {"repetitions", plan.dist.repetitions},
                     {"mu", plan.mu},
                     {"exponent", plan.exponent},
                     {"phi", cfg.phi},
                     {"eps", cfg.eps},
                     {"rho", cfg.rho},
                     {"C", cfg.c_mc},
                     {"seeds", per_seed},
                     {"queries", oracle.query_count() - q0}};
  return out;
}

}  // namespace sublin
