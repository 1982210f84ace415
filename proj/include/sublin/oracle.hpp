#pragma once

#include <atomic>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sublin/graph.hpp"
#include "sublin/rng.hpp"

namespace sublin {

struct NeighborAnswer {
  Vertex vertex;
  std::uint32_t shift = 0;                // e2lin offset on the directed slot
  std::span<const std::uint32_t> perm{};  // ulc permutation on the directed slot
};

// What every tester needs from the graph: degree and i-th neighbor queries,
// degree-weighted sampling, and a query tally. volume() is treated as known.
template <class O>
concept AdjacencyOracle = requires(const O& o, Vertex v, std::uint32_t i, Rng& rng) {
  { o.num_vertices() } -> std::convertible_to<std::size_t>;
  { o.volume() } -> std::convertible_to<std::uint64_t>;
  { o.degree(v) } -> std::convertible_to<std::uint32_t>;
  { o.neighbor(v, i) } -> std::same_as<NeighborAnswer>;
  { o.sample_degree_weighted(rng) } -> std::convertible_to<Vertex>;
  { o.query_count() } -> std::convertible_to<std::uint64_t>;
};

// Walker alias table for exact discrete sampling.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    double total = 0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      auto s = small.back();
      small.pop_back();
      auto l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1.0;
    for (auto i : small) prob_[i] = 1.0;
  }

  std::uint32_t sample(Rng& rng) const {
    const auto i = static_cast<std::uint32_t>(rng.uniform(prob_.size()));
    return rng.uniform01() < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

enum class SamplingMode { exact, rejection };

class GraphOracle {
 public:
  explicit GraphOracle(const Graph& g, SamplingMode mode = SamplingMode::exact)
      : g_(&g), mode_(mode) {
    if (mode == SamplingMode::exact) {
      std::vector<double> w(g.n());
      for (Vertex v = 0; v < g.n(); ++v) w[v] = g.degree(v);
      alias_ = AliasTable(w);
    }
  }
  GraphOracle(const GraphOracle& o) : g_(o.g_), mode_(o.mode_), alias_(o.alias_), queries_(o.query_count()) {}

  std::size_t num_vertices() const { return g_->n(); }
  std::uint64_t volume() const { return g_->volume(); }
  const Graph& graph() const { return *g_; }
  std::uint32_t q() const { return g_->q(); }

  std::uint32_t degree(Vertex v) const {
    if (v >= g_->n()) throw std::out_of_range("invalid vertex");
    queries_.fetch_add(1, std::memory_order_relaxed);
    return g_->degree(v);
  }

  NeighborAnswer neighbor(Vertex v, std::uint32_t i) const {
    if (v >= g_->n()) throw std::out_of_range("invalid vertex");
    if (i >= g_->degree(v)) throw std::out_of_range("index out of range");
    queries_.fetch_add(1, std::memory_order_relaxed);
    const auto s = g_->slot(v, i);
    return {g_->target(s), g_->shift(s), g_->perm(s)};
  }

  // One query in exact mode. Rejection mode counts every degree probe.
  Vertex sample_degree_weighted(Rng& rng) const {
    if (mode_ == SamplingMode::exact) {
      queries_.fetch_add(1, std::memory_order_relaxed);
      return alias_.sample(rng);
    }
    const double dmax = static_cast<double>(g_->max_degree());
    for (;;) {
      const auto v = static_cast<Vertex>(rng.uniform(g_->n()));
      const double d = degree(v);
      if (rng.uniform01() * dmax < d) return v;
    }
  }

  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }

 private:
  const Graph* g_;
  SamplingMode mode_;
  AliasTable alias_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

static_assert(AdjacencyOracle<GraphOracle>);

// Reads the whole graph through the oracle (every query is counted).
template <AdjacencyOracle O>
Graph materialize(const O& oracle) {
  const std::size_t n = oracle.num_vertices();
  std::vector<EdgeSpec> edges;
  std::vector<std::uint32_t> loop_seen(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    const auto d = oracle.degree(v);
    for (std::uint32_t i = 0; i < d; ++i) {
      const auto a = oracle.neighbor(v, i);
      if (a.vertex > v) edges.push_back({v, a.vertex, 0, {}});
      if (a.vertex == v && (loop_seen[v]++ % 2 == 0)) edges.push_back({v, v, 0, {}});
    }
  }
  return Graph(n, edges);
}

}  // namespace sublin
