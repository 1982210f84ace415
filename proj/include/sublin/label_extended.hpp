#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sublin/errors.hpp"
#include "sublin/graph.hpp"
#include "sublin/oracle.hpp"
#include "sublin/rng.hpp"

namespace sublin {

// Vertex (v, i) of the extension is encoded as v * q + i.
inline Vertex encode_label(Vertex v, std::uint32_t label, std::uint32_t q) { return v * q + label; }

// Read-only view of the label-extended graph over an annotated base oracle.
// Each extended query costs exactly one base query.
template <AdjacencyOracle Base>
class LabelExtendedOracle {
 public:
  LabelExtendedOracle(const Base& base, Annotation kind, std::uint32_t q) : base_(&base), kind_(kind), q_(q) {
    if (kind == Annotation::plain) throw ParameterError("label extension needs an annotated instance");
    if (q < 1) throw ParameterError("q must be >= 1");
  }

  std::size_t num_vertices() const { return base_->num_vertices() * q_; }
  std::uint64_t volume() const { return base_->volume() * q_; }
  std::uint32_t q() const { return q_; }
  const Base& base() const { return *base_; }

  std::uint32_t degree(Vertex x) const {
    if (x >= num_vertices()) throw std::out_of_range("invalid vertex");
    return base_->degree(x / q_);
  }

  NeighborAnswer neighbor(Vertex x, std::uint32_t j) const {
    if (x >= num_vertices()) throw std::out_of_range("invalid vertex");
    const std::uint32_t label = x % q_;
    const auto a = base_->neighbor(x / q_, j);
    const std::uint32_t next = kind_ == Annotation::e2lin ? (label + a.shift) % q_ : a.perm[label];
    return {encode_label(a.vertex, next, q_)};
  }

  Vertex sample_degree_weighted(Rng& rng) const {
    const Vertex v = base_->sample_degree_weighted(rng);
    return encode_label(v, static_cast<std::uint32_t>(rng.uniform(q_)), q_);
  }

  std::uint64_t query_count() const { return base_->query_count(); }

 private:
  const Base* base_;
  Annotation kind_;
  std::uint32_t q_;
};

inline LabelExtendedOracle<GraphOracle> extend(const GraphOracle& base) {
  return LabelExtendedOracle<GraphOracle>(base, base.graph().kind(), base.graph().q());
}

// Direct construction of the extension (no oracle accounting).
inline Graph materialize_extension(const Graph& g, std::size_t limit = 4096) {
  if (g.kind() == Annotation::plain) throw ParameterError("label extension needs an annotated instance");
  const std::uint32_t q = g.q();
  if (g.n() * q > limit) throw LimitError("exceeds brute-force limit (extension n*q)");
  std::vector<EdgeSpec> edges;
  edges.reserve(g.m() * q);
  for (const auto& e : g.edges())
    for (std::uint32_t i = 0; i < q; ++i) {
      const std::uint32_t j = g.kind() == Annotation::e2lin ? (i + g.shift(e.slot)) % q : g.perm(e.slot)[i];
      edges.push_back({encode_label(e.u, i, q), encode_label(e.v, j, q), 0, {}});
    }
  return Graph(g.n() * q, edges);
}

// Indicator of the set {(v, labels[v] + shift)} in the extension.
inline std::vector<char> label_section(const std::vector<std::uint32_t>& labels, std::uint32_t q,
                                       std::uint32_t shift = 0) {
  std::vector<char> in(labels.size() * q, 0);
  for (std::size_t v = 0; v < labels.size(); ++v)
    in[encode_label(static_cast<Vertex>(v), (labels[v] + shift) % q, q)] = 1;
  return in;
}

inline std::size_t component_count(const Graph& g) {
  std::vector<char> seen(g.n(), 0);
  std::size_t comps = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    ++comps;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return comps;
}

}  // namespace sublin
