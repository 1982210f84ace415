#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "sublin/cluster_test.hpp"
#include "sublin/errors.hpp"
#include "sublin/label_extended.hpp"
#include "sublin/oracle.hpp"
#include "sublin/verdict.hpp"

namespace sublin {

enum class LambdaRule { lemma, algorithm };

inline const char* to_string(LambdaRule r) { return r == LambdaRule::lemma ? "lemma" : "algorithm"; }

struct E2LinConfig {
  double phi = 0.1;
  double eps = 0.0;
  double rho = 0.4;
  std::uint32_t q = 2;
  LambdaRule lambda_rule = LambdaRule::lemma;
  // lemma rule: rho^2 phi^2 / (c_lambda q^6); algorithm rule: rho phi^2 / (c_lambda_alg q^12)
  double c_lambda = 64.0;
  double c_lambda_alg = 1.0;
  // rho must be at least feasibility * q^3 sqrt(eps) / phi.
  double feasibility = 0.01;
  ClusterabilityParams cluster{};
};

inline double e2lin_lambda(const E2LinConfig& c) {
  const double q = c.q;
  if (c.lambda_rule == LambdaRule::lemma) return c.rho * c.rho * c.phi * c.phi / (c.c_lambda * std::pow(q, 6));
  return c.rho * c.phi * c.phi / (c.c_lambda_alg * std::pow(q, 12));
}

inline void validate(const E2LinConfig& c) {
  if (!(c.phi > 0 && c.phi < 1)) throw ParameterError("phi must be in (0, 1)");
  if (!(c.rho > 0 && c.rho < 1)) throw ParameterError("rho must be in (0, 1)");
  if (!(c.eps >= 0 && c.eps < 1)) throw ParameterError("eps must be in [0, 1)");
  if (c.q < 1) throw ParameterError("q must be >= 1");
  const double need = c.feasibility * std::pow(c.q, 3) * std::sqrt(c.eps) / c.phi;
  if (c.rho < need)
    throw ParameterError("infeasible: rho=" + num(c.rho) + " below " + num(need));
}

inline ClusterabilityParams e2lin_cluster_params(const E2LinConfig& c) {
  ClusterabilityParams p = c.cluster;
  p.k = c.q - 1;
  p.lambda = e2lin_lambda(c);
  p.eps_cond = c.eps / 2.0;
  return p;
}

// Accept iff the label-extended graph fails the clusterability test.
template <AdjacencyOracle Base>
Verdict test_expander_e2lin(const Base& instance, const E2LinConfig& cfg, const Rng& rng) {
  validate(cfg);
  const std::uint64_t q0 = instance.query_count();
  Verdict out;
  if (cfg.q == 1) {
    out.decision = Decision::accept;
    out.diagnostics = {{"degenerate", "q=1"}, {"queries", instance.query_count() - q0}};
    return out;
  }
  const auto params = e2lin_cluster_params(cfg);
  validate(params);
  LabelExtendedOracle<Base> ext(instance, Annotation::e2lin, cfg.q);
  auto inner = test_clusterability(ext, params, rng.substream("cluster"));
  out.decision = inner.accepted() ? Decision::reject : Decision::accept;
  out.diagnostics = {{"lambda_rule", to_string(cfg.lambda_rule)},
                     {"lambda", params.lambda},
                     {"k", params.k},
                     {"eps_cond", params.eps_cond},
                     {"cluster", inner.diagnostics},
                     {"threshold", params.lambda},
                     {"queries", instance.query_count() - q0}};
  return out;
}

}  // namespace sublin
