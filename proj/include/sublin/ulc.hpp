#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sublin/errors.hpp"
#include "sublin/exact.hpp"
#include "sublin/graph.hpp"
#include "sublin/label_extended.hpp"
#include "sublin/oracle.hpp"
#include "sublin/rng.hpp"
#include "sublin/spectral.hpp"
#include "sublin/verdict.hpp"

namespace sublin {

// ---------------------------------------------------------------- f(r) schedule (log space)

inline double log_f_schedule(std::uint32_t r, std::uint32_t q, double log_eps, double phi) {
  if (q < 2) throw ParameterError("q must be >= 2");
  if (r < 2 || r > q + 1) throw ParameterError("r out of range [2, q+1]");
  const double lq = std::log(static_cast<double>(q));
  const double outer = std::pow(4.0, 2.0 - static_cast<double>(r));
  const double base = log_eps - std::log(2.0) - 20.0 * lq;
  return outer * base + (100.0 - 40.0 * r) * lq + ((r - 2.0) / (q - 1.0)) * std::log(phi);
}

inline double f_schedule(std::uint32_t r, std::uint32_t q, double eps, double phi) {
  return std::exp(log_f_schedule(r, q, std::log(eps), phi));
}

// log of (phi^2 / q^100)^(4^(q-1)), the largest eps inside the hypothesis shape.
inline double log_eps_hypothesis(std::uint32_t q, double phi) {
  return std::pow(4.0, q - 1.0) * (2.0 * std::log(phi) - 100.0 * std::log(static_cast<double>(q)));
}

inline double safe_exp(double x) {
  if (x > 700) return std::numeric_limits<double>::infinity();
  return std::exp(x);
}

// ---------------------------------------------------------------- clustering oracle

class ClusteringOracle {
 public:
  virtual ~ClusteringOracle() = default;
  virtual std::uint32_t cluster_count() const = 0;
  virtual std::uint32_t membership(Vertex x) const = 0;
  virtual std::uint64_t query_count() const = 0;
  virtual nlohmann::json report() const { return nlohmann::json::object(); }
};

// Membership read from a stored partition (ground truth or precomputed parts).
class FixedClusteringOracle : public ClusteringOracle {
 public:
  FixedClusteringOracle(std::vector<std::uint32_t> part, std::uint32_t r) : part_(std::move(part)), r_(r) {
    for (auto p : part_)
      if (p >= r_) throw ParameterError("cluster index out of range");
  }
  std::uint32_t cluster_count() const override { return r_; }
  std::uint32_t membership(Vertex x) const override {
    queries_.fetch_add(1, std::memory_order_relaxed);
    return part_.at(x);
  }
  std::uint64_t query_count() const override { return queries_.load(std::memory_order_relaxed); }

 private:
  std::vector<std::uint32_t> part_;
  std::uint32_t r_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

// Deterministic spectral partition of a materialized graph: bottom-r
// eigenvectors, degree-normalized embedding, farthest-point seeding and
// degree-weighted Lloyd refinement.
class ReferenceClusteringOracle : public ClusteringOracle {
 public:
  ReferenceClusteringOracle(const Graph& g, std::uint32_t r, std::uint64_t seed = 1, int rounds = 20,
                            const SpectralLimits& lim = {})
      : r_(r) {
    if (r < 1) throw ParameterError("r must be >= 1");
    const std::size_t n = g.n();
    part_.assign(n, 0);
    if (r > 1) {
      Eigen::VectorXd values;
      Eigen::MatrixXd u = bottom_eigenvectors(g, r, &values, lim);
      Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
      std::vector<double> w(n);
      for (Vertex v = 0; v < n; ++v) {
        w[v] = g.degree(v);
        x.row(v) = u.row(v) / std::sqrt(w[v]);
      }
      kmeans(x, w, seed, rounds);
    }
    summarize(g);
  }

  std::uint32_t cluster_count() const override { return r_; }
  std::uint32_t membership(Vertex x) const override {
    queries_.fetch_add(1, std::memory_order_relaxed);
    return part_.at(x);
  }
  std::uint64_t query_count() const override { return queries_.load(std::memory_order_relaxed); }
  const std::vector<std::uint32_t>& parts() const { return part_; }
  nlohmann::json report() const override { return report_; }

 private:
  void kmeans(const Eigen::MatrixXd& x, const std::vector<double>& w, std::uint64_t seed, int rounds) {
    const auto n = x.rows();
    Rng rng(seed);
    std::vector<double> cum(static_cast<std::size_t>(n));
    std::partial_sum(w.begin(), w.end(), cum.begin());
    const double pick = rng.uniform01() * cum.back();
    const auto first = std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
    Eigen::MatrixXd centers(static_cast<Eigen::Index>(r_), x.cols());
    centers.row(0) = x.row(first);
    Eigen::VectorXd dmin = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (std::uint32_t c = 1; c < r_; ++c) {
      Eigen::Index far = 0;
      dmin.maxCoeff(&far);
      centers.row(c) = x.row(far);
      dmin = dmin.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    for (int round = 0; round < rounds; ++round) {
      bool changed = false;
      for (Eigen::Index v = 0; v < n; ++v) {
        Eigen::Index best = 0;
        (centers.rowwise() - x.row(v)).rowwise().squaredNorm().minCoeff(&best);
        if (part_[v] != static_cast<std::uint32_t>(best)) {
          part_[v] = static_cast<std::uint32_t>(best);
          changed = true;
        }
      }
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(centers.rows(), centers.cols());
      std::vector<double> mass(r_, 0.0);
      for (Eigen::Index v = 0; v < n; ++v) {
        sum.row(part_[v]) += w[v] * x.row(v);
        mass[part_[v]] += w[v];
      }
      for (std::uint32_t c = 0; c < r_; ++c)
        if (mass[c] > 0) centers.row(c) = sum.row(c) / mass[c];
      if (!changed && round > 0) break;
    }
  }

  void summarize(const Graph& g) {
    std::vector<std::uint64_t> vol(r_, 0), cut(r_, 0), size(r_, 0);
    for (Vertex v = 0; v < g.n(); ++v) {
      vol[part_[v]] += g.degree(v);
      ++size[part_[v]];
      for (auto w : g.neighbors(v))
        if (part_[w] != part_[v]) ++cut[part_[v]];
    }
    nlohmann::json parts = nlohmann::json::array();
    for (std::uint32_t c = 0; c < r_; ++c) {
      nlohmann::json p = {{"size", size[c]},
                          {"volume", vol[c]},
                          {"outer_conductance", vol[c] ? static_cast<double>(cut[c]) / vol[c] : 0.0}};
      if (size[c] >= 2 && size[c] <= 20) {
        // Exact inner conductance of the induced subgraph, when it has no isolated vertex.
        std::vector<Vertex> idx(g.n(), 0);
        std::vector<std::pair<Vertex, Vertex>> e;
        Vertex k = 0;
        for (Vertex v = 0; v < g.n(); ++v)
          if (part_[v] == c) idx[v] = k++;
        std::vector<int> deg(k, 0);
        for (const auto& ed : g.edges())
          if (part_[ed.u] == c && part_[ed.v] == c) {
            e.emplace_back(idx[ed.u], idx[ed.v]);
            ++deg[idx[ed.u]];
            ++deg[idx[ed.v]];
          }
        if (std::find(deg.begin(), deg.end(), 0) == deg.end())
          p["inner_conductance"] = exact_conductance(make_plain(k, e));
      }
      parts.push_back(p);
    }
    report_ = {{"parts", parts}};
  }

  std::uint32_t r_;
  std::vector<std::uint32_t> part_;
  nlohmann::json report_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

// ---------------------------------------------------------------- outer conductance estimator

struct OuterConductanceConfig {
  double c_samples = 1.0;
  double max_samples = 4096;
};

struct OuterConductanceEstimate {
  double eta = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t samples = 0;
  bool capped = false;
};

inline double capped_count(double log_value, double cap, bool& capped) {
  if (log_value > std::log(cap)) {
    capped = true;
    return cap;
  }
  capped = false;
  return std::max(1.0, std::ceil(std::exp(log_value)));
}

// x uniform; with probability deg(x)/d move to a uniform neighbor, else stay;
// eta = #{O(x)=i, O(y)!=i} / #{O(x)=i}.
template <AdjacencyOracle O>
OuterConductanceEstimate test_outer_conductance(const O& graph, std::uint32_t d, std::uint32_t q, double log_alpha,
                                                double log_beta, const ClusteringOracle& clusters, std::uint32_t i,
                                                Rng& rng, const OuterConductanceConfig& cfg = {}) {
  const std::size_t n = graph.num_vertices();
  OuterConductanceEstimate est;
  const double log_s = std::log(cfg.c_samples) + 2.0 * log_alpha + std::log(static_cast<double>(q)) +
                       std::log(static_cast<double>(d)) + std::log(std::log(std::max<double>(n, 3))) - log_beta;
  est.samples = static_cast<std::uint64_t>(capped_count(log_s, cfg.max_samples, est.capped));
  for (std::uint64_t t = 0; t < est.samples; ++t) {
    const auto x = static_cast<Vertex>(rng.uniform(n));
    const std::uint32_t deg = graph.degree(x);
    if (deg > d) throw ParameterError("vertex degree exceeds the bound d");
    Vertex y = x;
    if (rng.uniform01() * d < deg) y = graph.neighbor(x, static_cast<std::uint32_t>(rng.uniform(deg))).vertex;
    if (clusters.membership(x) == i) {
      ++est.b;
      if (clusters.membership(y) != i) ++est.a;
    }
  }
  if (est.b == 0) throw LimitError("cluster too small");
  est.eta = static_cast<double>(est.a) / static_cast<double>(est.b);
  return est;
}

// ---------------------------------------------------------------- ULC tester

struct UlcConfig {
  std::uint32_t q = 2;
  std::uint32_t d = 4;
  double phi = 0.05;
  double log_eps = -std::numeric_limits<double>::infinity();  // log of eps
  double rho = 0.1;

  // eps <= c_eps_shape (phi^2/q^100)^(4^(q-1)); rho >= c_rho_shape q^(86q) eps^(4^(1-q)) / phi^4.
  double c_eps_shape = 1.0;
  double c_rho_shape = 1e-25;

  // |T| = c_volume d q ln n / xi0^2, xi0 = c_xi0 q^50 eps^(4^(1-q)) / phi^((2q-1)/(q-1)).
  double c_volume = 1.0;
  double c_xi0 = 1.0;
  double max_volume_samples = 4096;
  // s = c_membership d q ln n membership samples per r.
  double c_membership = 8.0;
  double max_membership_samples = 4096;
  // xi = c_xi beta q^10 / alpha^3.
  double c_xi = 1.0;
  // accept when eta <= c_threshold q^(85q) eps^(4^(1-r)) / phi^((2r-1)/(q-1)).
  double c_threshold = 3e-24;
  OuterConductanceConfig outer{};
  std::uint64_t oracle_seed = 1;
};

inline void validate(const UlcConfig& c) {
  if (c.q < 2) throw ParameterError("q must be >= 2");
  if (c.d < 1) throw ParameterError("d must be >= 1");
  if (!(c.phi > 0 && c.phi < 1)) throw ParameterError("phi must be in (0, 1)");
  if (!(c.rho > 0 && c.rho < 1)) throw ParameterError("rho must be in (0, 1)");
  if (std::isnan(c.log_eps) || c.log_eps >= 0) throw ParameterError("eps must be in [0, 1)");
  const double cap = std::log(c.c_eps_shape) + log_eps_hypothesis(c.q, c.phi);
  if (c.log_eps > cap)
    throw ParameterError("infeasible: log eps=" + num(c.log_eps) + " above hypothesis bound " +
                         num(cap));
  const double lq = std::log(static_cast<double>(c.q));
  const double need = std::log(c.c_rho_shape) + 86.0 * c.q * lq + std::pow(4.0, 1.0 - c.q) * c.log_eps -
                      4.0 * std::log(c.phi);
  if (std::log(c.rho) < need)
    throw ParameterError("infeasible: log rho=" + num(std::log(c.rho)) + " below " + num(need));
}

inline double log_outer_threshold(const UlcConfig& c, std::uint32_t r) {
  const double lq = std::log(static_cast<double>(c.q));
  return std::log(c.c_threshold) + 85.0 * c.q * lq + std::pow(4.0, 1.0 - r) * c.log_eps -
         ((2.0 * r - 1.0) / (c.q - 1.0)) * std::log(c.phi);
}

inline double log_xi0(const UlcConfig& c) {
  const std::uint32_t r = c.q;
  const double lq = std::log(static_cast<double>(c.q));
  return std::log(c.c_xi0) + 50.0 * lq + std::pow(4.0, 1.0 - r) * c.log_eps -
         ((2.0 * r - 1.0) / (c.q - 1.0)) * std::log(c.phi);
}

using ClusteringFactory =
    std::function<std::unique_ptr<ClusteringOracle>(std::uint32_t r, double log_alpha, double log_beta)>;

// Reference oracle factory over the materialized extension of g.
inline ClusteringFactory reference_factory(const Graph& g, std::uint64_t seed = 1) {
  auto ext = std::make_shared<Graph>(materialize_extension(g));
  return [ext, seed](std::uint32_t r, double, double) -> std::unique_ptr<ClusteringOracle> {
    return std::make_unique<ReferenceClusteringOracle>(*ext, r, seed);
  };
}

template <AdjacencyOracle Base>
Verdict unique_label_cover_test(const Base& instance, const UlcConfig& cfg, const ClusteringFactory& factory,
                                const Rng& rng) {
  validate(cfg);
  const std::uint64_t q0 = instance.query_count();
  const std::uint32_t q = cfg.q;
  const std::size_t n = instance.num_vertices();
  const double ln_n = std::log(std::max<double>(n, 3));
  LabelExtendedOracle<Base> ext(instance, Annotation::ulc, q);

  // Volume estimate from uniform vertices.
  const double lxi0 = log_xi0(cfg);
  bool t_capped = false;
  const double t_log = std::log(cfg.c_volume * cfg.d * q * ln_n) - 2.0 * lxi0;
  const auto t_size = static_cast<std::uint64_t>(capped_count(t_log, cfg.max_volume_samples, t_capped));
  Rng vrng = rng.substream("volume");
  double deg_sum = 0;
  for (std::uint64_t t = 0; t < t_size; ++t) deg_sum += instance.degree(static_cast<Vertex>(vrng.uniform(n)));
  const double x = static_cast<double>(n) / static_cast<double>(t_size) * deg_sum;

  nlohmann::json rounds = nlohmann::json::array();
  Decision decision = Decision::reject;
  std::uint64_t membership_queries = 0;
  for (std::uint32_t r = 2; r <= q && decision == Decision::reject; ++r) {
    const double log_alpha = log_f_schedule(r + 1, q, cfg.log_eps, cfg.phi) - std::log(30.0 * r);
    const double log_beta = std::log(static_cast<double>(r)) + log_f_schedule(r, q, cfg.log_eps, cfg.phi);
    const double xi = safe_exp(std::log(cfg.c_xi) + log_beta + 10.0 * std::log(static_cast<double>(q)) -
                               3.0 * log_alpha);
    auto clusters = factory(r, log_alpha, log_beta);
    bool s_capped = false;
    const auto s = static_cast<std::uint64_t>(
        capped_count(std::log(cfg.c_membership * cfg.d * q * ln_n), cfg.max_membership_samples, s_capped));
    Rng mrng = rng.substream("membership", r);
    std::vector<double> fsum(r, 0.0);
    const std::size_t np = ext.num_vertices();
    for (std::uint64_t t = 0; t < s; ++t) {
      const auto v = static_cast<Vertex>(mrng.uniform(np));
      fsum[clusters->membership(v)] += ext.degree(v);
    }
    std::vector<double> est(r);
    for (std::uint32_t i = 0; i < r; ++i) est[i] = static_cast<double>(np) / static_cast<double>(s) * fsum[i];
    const double floor = x * q / (4.0 * (q + 1.0));
    const bool floor_ok = std::all_of(est.begin(), est.end(), [&](double v) { return v >= floor; });
    const double log_tau = log_outer_threshold(cfg, r);
    const double tau = safe_exp(log_tau);
    nlohmann::json rec = {{"r", r},
                          {"log_alpha", log_alpha},
                          {"log_beta", log_beta},
                          {"xi", xi},
                          {"membership_samples", s},
                          {"membership_capped", s_capped},
                          {"volume_estimates", est},
                          {"volume_floor", floor},
                          {"floor_ok", floor_ok},
                          {"threshold", tau},
                          {"log_threshold", log_tau}};
    nlohmann::json tests = nlohmann::json::array();
    if (floor_ok) {
      for (std::uint32_t i = 0; i < r; ++i) {
        if (!(est[i] >= (1.0 - xi) * x && est[i] <= (1.0 + xi) * x)) continue;
        Rng trng = rng.substream("outer", r * 1000 + i);
        auto toc = test_outer_conductance(ext, cfg.d, q, log_alpha, log_beta, *clusters, i, trng, cfg.outer);
        tests.push_back({{"cluster", i},
                         {"eta", toc.eta},
                         {"samples", toc.samples},
                         {"capped", toc.capped},
                         {"passed", toc.eta <= tau}});
        if (toc.eta <= tau) {
          decision = Decision::accept;
          break;
        }
      }
    }
    rec["outer_tests"] = tests;
    membership_queries += clusters->query_count();
    rounds.push_back(rec);
  }
  Verdict out;
  out.decision = decision;
  out.diagnostics = {{"volume_estimate", x},
                     {"volume_samples", t_size},
                     {"volume_capped", t_capped},
                     {"log_xi0", lxi0},
                     {"rounds", rounds},
                     {"membership_queries", membership_queries},
                     {"queries", instance.query_count() - q0}};
  return out;
}

}  // namespace sublin
