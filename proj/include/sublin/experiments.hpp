#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublin/dist_test.hpp"
#include "sublin/e2lin.hpp"
#include "sublin/generators.hpp"
#include "sublin/label_extended.hpp"
#include "sublin/maxcut.hpp"
#include "sublin/oracle.hpp"
#include "sublin/parallel.hpp"
#include "sublin/spectral.hpp"
#include "sublin/ulc.hpp"

namespace sublin {

// ---------------------------------------------------------------- distribution test

// On a d-regular graph: p uniform, q = (1 +- a)/n on the two halves, so
// ||(p-q) D^{-1/2}||^2 = a^2 / (n d) exactly and both norms are at most 2/(n d).
struct EngineeredPair {
  Graph graph;
  std::vector<double> p, q;
  double delta_star = 0;
  double b_bound = 0;
};

inline EngineeredPair engineered_pair(std::size_t n, std::uint32_t d, double delta_star, std::uint64_t seed) {
  if (n % 2 != 0) throw ParameterError("n must be even");
  EngineeredPair e;
  e.graph = gen_random_regular(n, d, seed).graph;
  const double a = std::sqrt(delta_star * static_cast<double>(n) * d);
  if (a > 1.0) throw ParameterError("delta* too large for this graph");
  e.p.assign(n, 1.0 / static_cast<double>(n));
  e.q.resize(n);
  for (std::size_t v = 0; v < n; ++v) e.q[v] = (v < n / 2 ? 1.0 + a : 1.0 - a) / static_cast<double>(n);
  e.delta_star = a * a / (static_cast<double>(n) * d);
  e.b_bound = 2.0 / (static_cast<double>(n) * d);
  return e;
}

struct DistPoint {
  double ratio = 0;  // delta* / xi
  double delta_star = 0;
  std::size_t trials = 0;
  std::size_t accepts = 0;
  double accept_rate() const { return trials ? static_cast<double>(accepts) / static_cast<double>(trials) : 0.0; }
};

struct DistExperiment {
  double xi = 0;
  double delta = 0;
  DistTestPlan plan;
  std::vector<DistPoint> points;
  nlohmann::json to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points)
      pts.push_back({{"ratio", p.ratio}, {"delta_star", p.delta_star}, {"trials", p.trials},
                     {"accept_rate", p.accept_rate()}});
    return {{"xi", xi}, {"delta", delta}, {"r", plan.r}, {"repetitions", plan.repetitions}, {"points", pts}};
  }
};

inline DistExperiment dist_experiment(std::size_t n, std::uint32_t d, const std::vector<double>& ratios,
                                      std::size_t trials, double delta, const DistTestConfig& cfg,
                                      std::uint64_t seed) {
  DistExperiment ex;
  ex.xi = 1.0 / (16.0 * static_cast<double>(n) * d);
  ex.delta = delta;
  const double b = 2.0 / (static_cast<double>(n) * d);
  ex.plan = plan_l2_test(ex.xi, delta, b, cfg);
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    auto pair = engineered_pair(n, d, ratios[k] * ex.xi, seed);
    GraphOracle oracle(pair.graph);
    AliasTable ap(pair.p), aq(pair.q);
    DistPoint pt;
    pt.ratio = ratios[k];
    pt.delta_star = pair.delta_star;
    pt.trials = trials;
    Rng base = Rng(seed).substream("dist-point", k);
    for (std::size_t t = 0; t < trials; ++t) {
      auto sp = [&](Rng& r) { return static_cast<Vertex>(ap.sample(r)); };
      auto sq = [&](Rng& r) { return static_cast<Vertex>(aq.sample(r)); };
      auto v = l2_difference_test(sp, sq, oracle, ex.xi, delta, b, base.substream("trial", t), cfg);
      pt.accepts += v.accepted() ? 1 : 0;
    }
    ex.points.push_back(pt);
  }
  return ex;
}

// ---------------------------------------------------------------- end-to-end runs

struct RateResult {
  std::size_t runs = 0;
  std::size_t accepts = 0;
  std::size_t errors = 0;
  std::string error;
  std::vector<std::uint64_t> queries;
  double accept_rate() const { return runs ? static_cast<double>(accepts) / static_cast<double>(runs) : 0.0; }
  double reject_rate() const {
    return runs ? static_cast<double>(runs - accepts - errors) / static_cast<double>(runs) : 0.0;
  }
  nlohmann::json to_json() const {
    return {{"runs", runs}, {"accepts", accepts}, {"errors", errors}, {"error", error},
            {"accept_rate", accept_rate()}, {"reject_rate", reject_rate()}};
  }
};

// Max cut tester on planted instances. Infeasible configurations are reported
// with the error text and the plan projected at the feasibility cap.
struct MaxCutEndToEnd {
  bool feasible = true;
  std::string reason;
  double phi = 0;
  nlohmann::json projection;
  RateResult completeness, soundness;
};

inline MaxCutEndToEnd maxcut_end_to_end(std::size_t n, std::uint32_t d, double eps, double rho_corruption,
                                        std::size_t runs, const MaxCutConfig& base_cfg, std::uint64_t seed) {
  MaxCutEndToEnd out;
  GenOptions opt;
  opt.phi_min = 1e-6;
  auto planted = gen_planted_maxcut(n, d, eps, seed, opt);
  out.phi = planted.certificate.phi_lower;
  MaxCutConfig cfg = base_cfg;
  cfg.phi = out.phi;
  cfg.eps = eps;
  cfg.rho = rho_corruption;
  try {
    validate(cfg);
  } catch (const ParameterError& e) {
    out.feasible = false;
    out.reason = e.what();
  }
  MaxCutConfig at_cap = cfg;
  at_cap.eps = cfg.c_mc * cfg.phi * cfg.phi * cfg.rho / cfg.feasibility;
  const auto plan = plan_maxcut(at_cap, static_cast<double>(planted.graph.volume()), n);
  out.projection = {{"eps_cap", at_cap.eps},
                    {"walk_length", plan.walk_length},
                    {"xi_trm", plan.xi},
                    {"r", plan.dist.r},
                    {"repetitions", plan.dist.repetitions},
                    {"projected_queries", projected_queries_per_seed(plan) * static_cast<double>(cfg.start_vertices)},
                    {"query_budget", cfg.max_queries}};
  if (!out.feasible) return out;
  auto run = [&](double corruption, RateResult& res) {
    for (std::size_t i = 0; i < runs; ++i) {
      auto inst = gen_planted_maxcut(n, d, corruption, seed + 1000 + i, opt);
      GraphOracle o(inst.graph);
      ++res.runs;
      try {
        auto v = test_expander_maxcut(o, cfg, Rng(seed).substream("mc-run", i));
        res.accepts += v.accepted() ? 1 : 0;
        res.queries.push_back(o.query_count());
      } catch (const std::exception& e) {
        ++res.errors;
        res.error = e.what();
      }
    }
  };
  run(eps, out.completeness);
  run(rho_corruption, out.soundness);
  return out;
}

struct E2LinEndToEnd {
  bool feasible = true;
  std::string reason;
  double phi = 0;
  nlohmann::json rules;
  double lambda_q_planted = 0;
  double lambda_q_random = 0;
  RateResult completeness, soundness;
};

// E2Lin tester, q fixed, planted eps vs random offsets. Also records
// lambda_q of the extension for both instance types.
inline E2LinEndToEnd e2lin_end_to_end(std::size_t n, std::uint32_t d, std::uint32_t q, double eps, double rho,
                                      std::size_t runs, const E2LinConfig& base_cfg, std::uint64_t seed,
                                      bool measure_spectrum = true) {
  E2LinEndToEnd out;
  GenOptions opt;
  opt.phi_min = 1e-6;
  auto planted = gen_planted_e2lin(n, d, q, eps, seed, opt);
  out.phi = planted.certificate.phi_lower;
  E2LinConfig cfg = base_cfg;
  cfg.phi = out.phi;
  cfg.eps = eps;
  cfg.rho = rho;
  cfg.q = q;
  out.rules = nlohmann::json::object();
  for (LambdaRule rule : {LambdaRule::lemma, LambdaRule::algorithm}) {
    E2LinConfig c = cfg;
    c.lambda_rule = rule;
    auto p = e2lin_cluster_params(c);
    std::string status = "feasible";
    try {
      validate(c);
      validate(p);
    } catch (const ParameterError& e) {
      status = e.what();
    }
    out.rules[to_string(rule)] = {{"lambda", p.lambda}, {"eps_cond", p.eps_cond}, {"c1_lambda", p.c1 * p.lambda},
                                  {"status", status}};
  }
  try {
    validate(cfg);
    validate(e2lin_cluster_params(cfg));
  } catch (const ParameterError& e) {
    out.feasible = false;
    out.reason = e.what();
  }
  if (measure_spectrum && n * q <= 4096) {
    auto random = gen_planted_e2lin(n, d, q, 1.0, seed + 1, opt);
    out.lambda_q_planted = spectrum(materialize_extension(planted.graph), {}).lambda(q);
    out.lambda_q_random = spectrum(materialize_extension(random.graph), {}).lambda(q);
  }
  if (!out.feasible) return out;
  auto run = [&](double corruption, RateResult& res) {
    for (std::size_t i = 0; i < runs; ++i) {
      auto inst = gen_planted_e2lin(n, d, q, corruption, seed + 1000 + i, opt);
      GraphOracle o(inst.graph);
      ++res.runs;
      try {
        auto v = test_expander_e2lin(o, cfg, Rng(seed).substream("e2lin-run", i));
        res.accepts += v.accepted() ? 1 : 0;
        res.queries.push_back(o.query_count());
      } catch (const std::exception& e) {
        ++res.errors;
        res.error = e.what();
      }
    }
  };
  run(eps, out.completeness);
  run(1.0, out.soundness);
  return out;
}

// ULC driver with the reference oracle: planted eps = 0 vs random permutations.
struct UlcEndToEnd {
  RateResult completeness, soundness;
  std::vector<double> soundness_eta;
};

inline UlcEndToEnd ulc_end_to_end(std::size_t n, const UlcConfig& cfg, std::size_t runs, std::uint64_t seed,
                                  unsigned jobs = 1) {
  UlcEndToEnd out;
  GenOptions opt;
  opt.phi_min = cfg.phi;
  auto run = [&](double eps, RateResult& res, std::vector<double>* etas) {
    std::vector<int> verdict(runs, -1);
    std::vector<std::uint64_t> queries(runs, 0);
    std::vector<double> eta(runs, -1);
    std::vector<std::string> err(runs);
    parallel_for(runs, jobs, [&](std::size_t i) {
      try {
        auto inst = gen_planted_ulc(n, cfg.d, cfg.q, eps, seed + i, opt);
        GraphOracle o(inst.graph);
        auto v = unique_label_cover_test(o, cfg, reference_factory(inst.graph, cfg.oracle_seed),
                                         Rng(seed).substream("ulc-run", i));
        verdict[i] = v.accepted() ? 1 : 0;
        queries[i] = o.query_count();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : v.diagnostics["rounds"])
          for (const auto& t : r["outer_tests"]) best = std::min(best, t["eta"].get<double>());
        eta[i] = best;
      } catch (const std::exception& e) {
        err[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < runs; ++i) {
      ++res.runs;
      if (verdict[i] < 0) {
        ++res.errors;
        res.error = err[i];
        continue;
      }
      res.accepts += verdict[i] == 1 ? 1 : 0;
      res.queries.push_back(queries[i]);
      if (etas) etas->push_back(eta[i]);
    }
  };
  run(0.0, out.completeness, nullptr);
  run(1.0, out.soundness, &out.soundness_eta);
  return out;
}

// ---------------------------------------------------------------- outer conductance bracket

struct OuterBracket {
  double phi_hat = 0;  // outer conductance of the tested cluster, by edge scan
  double alpha = 0;
  double beta = 0;
  double lower = 0, upper = 0;
  std::size_t runs = 0, within = 0, tight = 0;
  std::uint64_t samples = 0;
  double mean_eta = 0;
  nlohmann::json to_json() const {
    return {{"phi_hat", phi_hat}, {"alpha", alpha}, {"beta", beta}, {"lower", lower}, {"upper", upper},
            {"runs", runs},       {"within", within}, {"within_3se_of_phi_hat", tight},
            {"samples", samples}, {"mean_eta", mean_eta}};
  }
};

// Induced subgraph on the vertices with part[v] == c (isolated vertices dropped).
inline Graph induced_part(const Graph& g, const std::vector<std::uint32_t>& part, std::uint32_t c) {
  std::vector<Vertex> idx(g.n(), 0);
  Vertex k = 0;
  for (Vertex v = 0; v < g.n(); ++v)
    if (part[v] == c) idx[v] = k++;
  std::vector<std::pair<Vertex, Vertex>> e;
  std::vector<int> deg(k, 0);
  for (const auto& ed : g.edges())
    if (part[ed.u] == c && part[ed.v] == c) {
      e.emplace_back(idx[ed.u], idx[ed.v]);
      ++deg[idx[ed.u]];
      ++deg[idx[ed.v]];
    }
  if (std::find(deg.begin(), deg.end(), 0) != deg.end()) throw LimitError("induced part has an isolated vertex");
  return make_plain(k, e);
}

// Planted two-cluster graph; the oracle returns the planted halves. alpha is the
// smaller inner-conductance lower bound lambda_2/2 of the halves, beta the larger
// outer conductance.
inline OuterBracket outer_bracket_experiment(std::size_t half, std::uint32_t d, std::size_t cross, std::size_t runs,
                                             std::uint64_t seed, const OuterConductanceConfig& cfg = {}) {
  auto inst = gen_two_cluster(half, d, cross, seed);
  const Graph& g = inst.graph;
  OuterBracket ob;
  ob.alpha = std::numeric_limits<double>::infinity();
  for (std::uint32_t c = 0; c < 2; ++c) {
    std::vector<char> in(g.n());
    for (Vertex v = 0; v < g.n(); ++v) in[v] = inst.planted[v] == c;
    ob.beta = std::max(ob.beta, set_conductance(g, in));
    auto prof = spectrum(induced_part(g, inst.planted, c));
    ob.alpha = std::min(ob.alpha, (prof.lambda2() - prof.tolerance) / 2.0);
  }
  std::vector<char> in0(g.n());
  for (Vertex v = 0; v < g.n(); ++v) in0[v] = inst.planted[v] == 0;
  ob.phi_hat = set_conductance(g, in0);
  const double slack = ob.beta / (ob.alpha * ob.alpha);
  ob.lower = 0.5 * ob.phi_hat / d - slack;
  ob.upper = 1.5 * ob.phi_hat + slack;
  FixedClusteringOracle oracle(inst.planted, 2);
  GraphOracle go(g);
  double sum = 0;
  for (std::size_t i = 0; i < runs; ++i) {
    Rng rng = Rng(seed).substream("outer-run", i);
    auto est = test_outer_conductance(go, d, 2, std::log(ob.alpha), std::log(ob.beta), oracle, 0, rng, cfg);
    ob.samples = est.samples;
    ++ob.runs;
    sum += est.eta;
    if (est.eta >= ob.lower && est.eta <= ob.upper) ++ob.within;
    const double se = std::sqrt(ob.phi_hat * (1 - ob.phi_hat) / static_cast<double>(std::max<std::uint64_t>(est.b, 1)));
    if (std::abs(est.eta - ob.phi_hat) <= 3 * se + 1e-12) ++ob.tight;
  }
  ob.mean_eta = sum / static_cast<double>(runs);
  return ob;
}

// ---------------------------------------------------------------- query scaling

struct ScalingRow {
  std::uint64_t m = 0;
  std::size_t n = 0;
  std::uint32_t d = 0;
  double phi_lower = 0;
  std::uint64_t queries = 0;
  std::string verdict;
  std::size_t walk_length = 0;
  double r = 0;
  std::size_t repetitions = 0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  double slope = 0;
  double intercept = 0;
};

inline std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return {slope, (sy - slope * sx) / static_cast<double>(k)};
}

// maxcut-test on planted bipartite expanders (n = min(m/4, n_cap), d = 2m/n),
// one start vertex, fixed (phi, eps, rho).
inline ScalingResult profile_maxcut_queries(const std::vector<std::uint64_t>& ms, const MaxCutConfig& cfg,
                                            std::uint64_t seed, std::size_t n_cap = 4096) {
  ScalingResult out;
  std::vector<double> xs, ys;
  for (auto m : ms) {
    ScalingRow row;
    row.m = m;
    row.n = static_cast<std::size_t>(std::min<std::uint64_t>(m / 4, n_cap));
    row.d = static_cast<std::uint32_t>(2 * m / row.n);
    GenOptions opt;
    opt.phi_min = row.n <= opt.spectral.dense_limit ? 1e-6 : 0.0;
    auto inst = gen_planted_maxcut(row.n, row.d, 0.0, seed + m, opt);
    row.phi_lower = inst.certificate.phi_lower;
    GraphOracle o(inst.graph);
    auto v = test_expander_maxcut(o, cfg, Rng(seed).substream("profile", m));
    row.queries = o.query_count();
    row.verdict = to_string(v.decision);
    row.walk_length = v.diagnostics["walk_length"].get<std::size_t>();
    row.r = v.diagnostics["r"].get<double>();
    row.repetitions = v.diagnostics["repetitions"].get<std::size_t>();
    xs.push_back(static_cast<double>(m));
    ys.push_back(static_cast<double>(row.queries));
    out.rows.push_back(row);
  }
  if (xs.size() >= 2) std::tie(out.slope, out.intercept) = loglog_fit(xs, ys);
  return out;
}

}  // namespace sublin
