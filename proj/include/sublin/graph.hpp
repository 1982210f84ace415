#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sublin/errors.hpp"

namespace sublin {

using Vertex = std::uint32_t;

enum class Annotation { plain, e2lin, ulc };

inline const char* to_string(Annotation a) {
  switch (a) {
    case Annotation::plain: return "plain";
    case Annotation::e2lin: return "e2lin";
    case Annotation::ulc: return "ulc";
  }
  return "?";
}

// One undirected edge as given at construction. For e2lin the offset c
// means label(v) = label(u) + c (mod q); for ulc perm[i] is the label of v
// that is consistent with label i on u.
struct EdgeSpec {
  Vertex u = 0;
  Vertex v = 0;
  std::int64_t offset = 0;
  std::vector<std::uint32_t> perm;
};

struct EdgeRecord {
  Vertex u;
  Vertex v;
  std::uint64_t slot;  // position of v in u's neighbor list (global slot index)
};

// Immutable CSR graph with optional per-directed-slot payloads.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, const std::vector<EdgeSpec>& edges, Annotation kind = Annotation::plain,
        std::uint32_t q = 0)
      : n_(n), kind_(kind), q_(q) {
    if (kind != Annotation::plain && q < 1) throw ParameterError("annotated graph needs q >= 1");
    std::vector<std::uint64_t> deg(n, 0);
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) throw ParameterError("edge endpoint out of range");
      ++deg[e.u];
      ++deg[e.v];
    }
    for (std::size_t v = 0; v < n; ++v)
      if (deg[v] == 0) throw ParameterError("vertex " + std::to_string(v) + " has degree 0");
    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    const std::uint64_t slots = offsets_[n];
    targets_.resize(slots);
    if (kind == Annotation::e2lin) shift_.resize(slots);
    if (kind == Annotation::ulc) perm_.resize(slots * q);
    std::vector<std::uint64_t> fill(offsets_.begin(), offsets_.end() - 1);
    edges_.reserve(edges.size());
    for (const auto& e : edges) {
      const std::uint64_t a = fill[e.u]++;
      const std::uint64_t b = fill[e.v]++;
      targets_[a] = e.v;
      targets_[b] = e.u;
      edges_.push_back({e.u, e.v, a});
      if (kind == Annotation::e2lin) {
        const std::int64_t c = ((e.offset % q) + q) % q;
        shift_[a] = static_cast<std::uint32_t>(c);
        shift_[b] = static_cast<std::uint32_t>((q - c) % q);
      } else if (kind == Annotation::ulc) {
        if (e.perm.size() != q) throw ParameterError("permutation has wrong length");
        std::vector<bool> seen(q, false);
        for (std::uint32_t i = 0; i < q; ++i) {
          const std::uint32_t img = e.perm[i];
          if (img >= q || seen[img]) throw ParameterError("payload is not a permutation");
          seen[img] = true;
          perm_[a * q + i] = img;
          perm_[b * q + img] = i;
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) max_degree_ = std::max<std::uint64_t>(max_degree_, deg[v]);
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  std::uint64_t volume() const { return offsets_.empty() ? 0 : offsets_.back(); }
  Annotation kind() const { return kind_; }
  std::uint32_t q() const { return q_; }
  std::uint64_t max_degree() const { return max_degree_; }

  std::uint32_t degree(Vertex v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }
  std::uint64_t slot(Vertex v, std::uint32_t i) const { return offsets_[v] + i; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  Vertex target(std::uint64_t slot) const { return targets_[slot]; }
  std::uint32_t shift(std::uint64_t slot) const { return shift_.empty() ? 0 : shift_[slot]; }
  std::span<const std::uint32_t> perm(std::uint64_t slot) const {
    if (perm_.empty()) return {};
    return {perm_.data() + slot * q_, q_};
  }
  std::span<const EdgeRecord> edges() const { return edges_; }

  // True when the constraint on the slot is satisfied by the given labels.
  bool satisfied(Vertex u, std::uint64_t slot, std::uint32_t label_u, std::uint32_t label_v) const {
    switch (kind_) {
      case Annotation::e2lin: return (label_u + shift_[slot]) % q_ == label_v;
      case Annotation::ulc: return perm_[slot * q_ + label_u] == label_v;
      case Annotation::plain: return label_u != label_v;
    }
    (void)u;
    return false;
  }

  bool is_simple() const {
    std::vector<Vertex> buf;
    for (Vertex v = 0; v < n_; ++v) {
      auto nb = neighbors(v);
      buf.assign(nb.begin(), nb.end());
      std::sort(buf.begin(), buf.end());
      if (std::adjacent_find(buf.begin(), buf.end()) != buf.end()) return false;
      if (std::binary_search(buf.begin(), buf.end(), v)) return false;
    }
    return true;
  }

  // The edge list back in EdgeSpec form (payloads included).
  std::vector<EdgeSpec> edge_specs() const {
    std::vector<EdgeSpec> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) {
      EdgeSpec s{e.u, e.v, 0, {}};
      if (kind_ == Annotation::e2lin) s.offset = shift_[e.slot];
      if (kind_ == Annotation::ulc) {
        auto p = perm(e.slot);
        s.perm.assign(p.begin(), p.end());
      }
      out.push_back(std::move(s));
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  Annotation kind_ = Annotation::plain;
  std::uint32_t q_ = 0;
  std::uint64_t max_degree_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<std::uint32_t> shift_;
  std::vector<std::uint32_t> perm_;
  std::vector<EdgeRecord> edges_;
};

inline Graph make_plain(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<EdgeSpec> specs;
  specs.reserve(edges.size());
  for (auto [u, v] : edges) specs.push_back({u, v, 0, {}});
  return Graph(n, specs);
}

// Small named graphs used throughout tests and examples.
namespace named {

inline Graph complete(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return make_plain(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < n; ++u) e.emplace_back(u, static_cast<Vertex>((u + 1) % n));
  return make_plain(n, e);
}

inline Graph path(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return make_plain(n, e);
}

inline Graph star(std::size_t leaves) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 1; u <= leaves; ++u) e.emplace_back(0, u);
  return make_plain(leaves + 1, e);
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < a; ++u)
    for (Vertex v = 0; v < b; ++v) e.emplace_back(u, static_cast<Vertex>(a + v));
  return make_plain(a + b, e);
}

inline Graph petersen() {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  return make_plain(10, e);
}

// Two triangles joined by a single edge.
inline Graph barbell_triangles() {
  return make_plain(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

}  // namespace named

}  // namespace sublin
