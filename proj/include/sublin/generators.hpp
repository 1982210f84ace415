#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "sublin/cnf.hpp"
#include "sublin/errors.hpp"
#include "sublin/exact.hpp"
#include "sublin/graph.hpp"
#include "sublin/rng.hpp"
#include "sublin/spectral.hpp"

namespace sublin {

struct Certificate {
  bool certified = false;  // false when n is above the dense limit and no bound was requested
  double lambda2 = 0;
  double phi_lower = 0;  // lambda2 / 2
  int attempts = 0;
};

inline nlohmann::json to_json(const Certificate& c) {
  return {{"certified", c.certified}, {"lambda2", c.lambda2}, {"phi_lower_bound", c.phi_lower},
          {"attempts", c.attempts}};
}

struct CertifiedGraph {
  Graph graph;
  Certificate certificate;
};

struct GenOptions {
  double phi_min = 0;
  int max_attempts = 100;
  SpectralLimits spectral{};
};

namespace detail {

inline std::uint64_t edge_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Sequential random pairing that never creates loops or repeated edges;
// returns nothing when it paints itself into a corner.
inline std::optional<std::vector<std::pair<Vertex, Vertex>>> pair_points(std::vector<Vertex> left,
                                                                         std::vector<Vertex> right,
                                                                         bool bipartite, Rng& rng) {
  std::vector<std::pair<Vertex, Vertex>> out;
  std::unordered_set<std::uint64_t> present;
  auto ok = [&](Vertex a, Vertex b) { return a != b && !present.count(edge_key(a, b)); };
  auto take = [&](std::vector<Vertex>& v, std::size_t i) {
    std::swap(v[i], v.back());
    v.pop_back();
  };
  for (;;) {
    if (bipartite ? left.empty() : left.size() < 2) break;
    bool done = false;
    for (int tries = 0; tries < 64 && !done; ++tries) {
      std::size_t i, j;
      if (bipartite) {
        i = rng.uniform(left.size());
        j = rng.uniform(right.size());
        if (!ok(left[i], right[j])) continue;
        out.emplace_back(left[i], right[j]);
        present.insert(edge_key(left[i], right[j]));
        take(left, i);
        take(right, j);
      } else {
        i = rng.uniform(left.size());
        j = rng.uniform(left.size());
        if (i == j || !ok(left[i], left[j])) continue;
        out.emplace_back(left[i], left[j]);
        present.insert(edge_key(left[i], left[j]));
        if (i < j) std::swap(i, j);
        take(left, i);
        take(left, j);
      }
      done = true;
    }
    if (done) continue;
    // Few points left or unlucky: list every admissible pair explicitly.
    std::vector<std::pair<std::size_t, std::size_t>> cand;
    if (bipartite) {
      for (std::size_t i = 0; i < left.size(); ++i)
        for (std::size_t j = 0; j < right.size(); ++j)
          if (ok(left[i], right[j])) cand.emplace_back(i, j);
    } else {
      for (std::size_t i = 0; i < left.size(); ++i)
        for (std::size_t j = i + 1; j < left.size(); ++j)
          if (ok(left[i], left[j])) cand.emplace_back(i, j);
    }
    if (cand.empty()) return std::nullopt;
    auto [i, j] = cand[rng.uniform(cand.size())];
    if (bipartite) {
      out.emplace_back(left[i], right[j]);
      present.insert(edge_key(left[i], right[j]));
      take(left, i);
      take(right, j);
    } else {
      out.emplace_back(left[i], left[j]);
      present.insert(edge_key(left[i], left[j]));
      take(left, j);
      take(left, i);
    }
  }
  return out;
}

inline Certificate certify(const Graph& g, const GenOptions& opt) {
  Certificate c;
  if (g.n() > opt.spectral.dense_limit) {
    if (opt.phi_min > 0) throw LimitError("cannot certify expansion above the dense limit");
    return c;
  }
  c.certified = true;
  if (!is_connected(g)) return c;
  auto prof = spectrum(g, opt.spectral);
  c.certified = true;
  c.lambda2 = prof.lambda2();
  c.phi_lower = std::max(0.0, c.lambda2 - prof.tolerance) / 2.0;
  return c;
}

}  // namespace detail

inline CertifiedGraph gen_random_regular(std::size_t n, std::uint32_t d, std::uint64_t seed,
                                         const GenOptions& opt = {}) {
  if (d < 3) throw ParameterError("d must be >= 3");
  if ((n * d) % 2 != 0) throw ParameterError("n*d must be even");
  if (n <= d) throw ParameterError("need n > d for a simple d-regular graph");
  Rng base(seed);
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    Rng rng = base.substream("regular", static_cast<std::uint64_t>(attempt));
    std::vector<Vertex> pts;
    pts.reserve(n * d);
    for (Vertex v = 0; v < n; ++v)
      for (std::uint32_t k = 0; k < d; ++k) pts.push_back(v);
    auto pairs = detail::pair_points(pts, {}, false, rng);
    if (!pairs) continue;
    Graph g = make_plain(n, *pairs);
    auto cert = detail::certify(g, opt);
    cert.attempts = attempt;
    if (cert.certified ? cert.phi_lower >= opt.phi_min && cert.lambda2 > 0 : opt.phi_min <= 0)
      return {std::move(g), cert};
  }
  throw LimitError("cannot certify expansion");
}

struct PlantedInstance {
  Graph graph;
  std::vector<std::uint32_t> planted;  // labels (side 0/1 for max cut)
  double corruption = 0;
  std::uint64_t violations = 0;
  Certificate certificate;
};

// Constraints violated by the planted solution, by full edge scan.
inline std::uint64_t count_violations(const Graph& g, const std::vector<std::uint32_t>& planted) {
  std::uint64_t bad = 0;
  for (const auto& e : g.edges()) bad += g.satisfied(e.u, e.slot, planted[e.u], planted[e.v]) ? 0 : 1;
  return bad;
}

inline nlohmann::json to_json(const PlantedInstance& p) {
  return {{"corruption", p.corruption},
          {"violations", p.violations},
          {"m", p.graph.m()},
          {"planted", p.planted},
          {"certificate", to_json(p.certificate)}};
}

// Balanced random bipartite d-regular graph, then round(eps*m/2) degree-preserving
// swaps (a1,b1),(a2,b2) -> (a1,a2),(b1,b2), each creating two uncut edges.
inline PlantedInstance gen_planted_maxcut(std::size_t n, std::uint32_t d, double eps, std::uint64_t seed,
                                          const GenOptions& opt = {}) {
  if (n % 2 != 0) throw ParameterError("n must be even");
  if (d < 1 || d > n / 2) throw ParameterError("d must be in [1, n/2]");
  if (eps < 0 || eps > 1) throw ParameterError("eps must be in [0, 1]");
  const std::size_t h = n / 2;
  Rng base(seed);
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    Rng rng = base.substream("planted-maxcut", static_cast<std::uint64_t>(attempt));
    std::vector<Vertex> left, right;
    for (Vertex v = 0; v < h; ++v)
      for (std::uint32_t k = 0; k < d; ++k) {
        left.push_back(v);
        right.push_back(static_cast<Vertex>(v + h));
      }
    auto pairs = detail::pair_points(left, right, true, rng);
    if (!pairs) continue;
    auto edges = *pairs;
    std::unordered_set<std::uint64_t> present;
    for (auto [a, b] : edges) present.insert(detail::edge_key(a, b));
    const auto swaps = static_cast<std::size_t>(std::llround(eps * static_cast<double>(edges.size()) / 2.0));
    std::vector<std::size_t> crossing(edges.size());
    std::iota(crossing.begin(), crossing.end(), 0);
    std::size_t done = 0;
    for (std::size_t tries = 0; done < swaps && tries < 1000 * (swaps + 1) && crossing.size() >= 2; ++tries) {
      const std::size_t i = rng.uniform(crossing.size());
      const std::size_t j = rng.uniform(crossing.size());
      if (i == j) continue;
      auto [a1, b1] = edges[crossing[i]];
      auto [a2, b2] = edges[crossing[j]];
      if (present.count(detail::edge_key(a1, a2)) || present.count(detail::edge_key(b1, b2))) continue;
      present.erase(detail::edge_key(a1, b1));
      present.erase(detail::edge_key(a2, b2));
      present.insert(detail::edge_key(a1, a2));
      present.insert(detail::edge_key(b1, b2));
      edges[crossing[i]] = {a1, a2};
      edges[crossing[j]] = {b1, b2};
      const std::size_t hi = std::max(i, j), lo = std::min(i, j);
      std::swap(crossing[hi], crossing.back());
      crossing.pop_back();
      std::swap(crossing[lo], crossing.back());
      crossing.pop_back();
      ++done;
    }
    if (done < swaps) continue;
    Graph g = make_plain(n, edges);
    auto cert = detail::certify(g, opt);
    cert.attempts = attempt;
    if (opt.phi_min > 0 && (!cert.certified || cert.phi_lower < opt.phi_min)) continue;
    PlantedInstance p;
    p.planted.assign(n, 0);
    for (std::size_t v = h; v < n; ++v) p.planted[v] = 1;
    p.violations = count_violations(g, p.planted);
    p.corruption = eps;
    p.graph = std::move(g);
    p.certificate = cert;
    return p;
  }
  throw LimitError("cannot certify expansion");
}

enum class Completion { random, aligned };

namespace detail {

inline std::vector<std::uint32_t> random_permutation(std::uint32_t q, Rng& rng) {
  std::vector<std::uint32_t> p(q);
  std::iota(p.begin(), p.end(), 0);
  for (std::uint32_t i = q; i > 1; --i) std::swap(p[i - 1], p[rng.uniform(i)]);
  return p;
}

inline PlantedInstance planted_labels(Annotation kind, std::size_t n, std::uint32_t d, std::uint32_t q,
                                      double eps, std::uint64_t seed, const GenOptions& opt,
                                      Completion completion) {
  if (q < 1) throw ParameterError("q must be >= 1");
  if (eps < 0 || eps > 1) throw ParameterError("eps must be in [0, 1]");
  auto base = gen_random_regular(n, d, seed, opt);
  Rng rng = Rng(seed).substream(kind == Annotation::e2lin ? "planted-e2lin" : "planted-ulc");
  std::vector<std::uint32_t> psi(n);
  for (auto& x : psi) x = static_cast<std::uint32_t>(rng.uniform(q));
  auto specs = base.graph.edge_specs();
  for (auto& e : specs) {
    if (kind == Annotation::e2lin) {
      e.offset = (static_cast<std::int64_t>(psi[e.v]) - psi[e.u] + q) % q;
    } else {
      const std::uint32_t shift = (psi[e.v] + q - psi[e.u]) % q;
      e.perm.resize(q);
      if (completion == Completion::aligned) {
        for (std::uint32_t i = 0; i < q; ++i) e.perm[i] = (i + shift) % q;
      } else {
        // Random bijection that sends psi(u) to psi(v).
        auto rest = random_permutation(q, rng);
        rest.erase(std::find(rest.begin(), rest.end(), psi[e.v]));
        std::size_t k = 0;
        for (std::uint32_t i = 0; i < q; ++i) e.perm[i] = i == psi[e.u] ? psi[e.v] : rest[k++];
      }
    }
  }
  const auto m = specs.size();
  const auto corrupt = static_cast<std::size_t>(std::llround(eps * static_cast<double>(m)));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < corrupt; ++i) {
    std::swap(order[i], order[i + rng.uniform(m - i)]);
    auto& e = specs[order[i]];
    if (kind == Annotation::e2lin)
      e.offset = static_cast<std::int64_t>(rng.uniform(q));
    else
      e.perm = random_permutation(q, rng);
  }
  PlantedInstance p;
  p.graph = Graph(n, specs, kind, q);
  p.planted = psi;
  p.corruption = eps;
  p.violations = count_violations(p.graph, psi);
  p.certificate = base.certificate;
  return p;
}

}  // namespace detail

// Offsets satisfy label(v) = label(u) + c_uv on the directed slot u -> v.
inline PlantedInstance gen_planted_e2lin(std::size_t n, std::uint32_t d, std::uint32_t q, double eps,
                                         std::uint64_t seed, const GenOptions& opt = {}) {
  return detail::planted_labels(Annotation::e2lin, n, d, q, eps, seed, opt, Completion::random);
}

inline PlantedInstance gen_planted_ulc(std::size_t n, std::uint32_t d, std::uint32_t q, double eps,
                                       std::uint64_t seed, const GenOptions& opt = {},
                                       Completion completion = Completion::random) {
  return detail::planted_labels(Annotation::ulc, n, d, q, eps, seed, opt, completion);
}

// Two d-regular halves joined by `cross` edges through degree-preserving swaps.
// The planted labels are the halves.
inline PlantedInstance gen_two_cluster(std::size_t half, std::uint32_t d, std::size_t cross, std::uint64_t seed,
                                       const GenOptions& opt = {}) {
  if (cross % 2 != 0) throw ParameterError("cross must be even");
  GenOptions inner = opt;
  inner.phi_min = 0;
  auto a = gen_random_regular(half, d, seed, inner);
  auto b = gen_random_regular(half, d, mix64(seed + 1), inner);
  std::vector<std::pair<Vertex, Vertex>> ea, eb;
  for (const auto& e : a.graph.edges()) ea.emplace_back(e.u, e.v);
  for (const auto& e : b.graph.edges())
    eb.emplace_back(static_cast<Vertex>(e.u + half), static_cast<Vertex>(e.v + half));
  if (cross / 2 > std::min(ea.size(), eb.size())) throw ParameterError("too many cross edges");
  Rng rng = Rng(seed).substream("two-cluster");
  std::vector<std::pair<Vertex, Vertex>> all;
  for (std::size_t k = 0; k < cross / 2; ++k) {
    const auto i = rng.uniform(ea.size());
    const auto j = rng.uniform(eb.size());
    auto [a1, a2] = ea[i];
    auto [b1, b2] = eb[j];
    all.emplace_back(a1, b1);
    all.emplace_back(a2, b2);
    ea[i] = ea.back();
    ea.pop_back();
    eb[j] = eb.back();
    eb.pop_back();
  }
  all.insert(all.end(), ea.begin(), ea.end());
  all.insert(all.end(), eb.begin(), eb.end());
  PlantedInstance p;
  p.graph = make_plain(2 * half, all);
  p.planted.assign(2 * half, 0);
  for (std::size_t v = half; v < 2 * half; ++v) p.planted[v] = 1;
  p.violations = cross;
  p.certificate = detail::certify(p.graph, opt);
  return p;
}

// ---------------------------------------------------------------- CNF

inline Cnf3 random_cnf(std::uint32_t num_vars, std::uint32_t num_clauses, std::uint32_t k_bound, Rng& rng) {
  if (num_vars < 3) throw ParameterError("need at least 3 variables");
  Cnf3 f{num_vars, {}};
  std::vector<std::uint32_t> occ(2 * num_vars, 0);
  for (std::uint32_t c = 0; c < num_clauses; ++c) {
    bool placed = false;
    for (int tries = 0; tries < 1000 && !placed; ++tries) {
      Clause cl;
      std::vector<std::uint32_t> vars;
      while (vars.size() < 3) {
        auto v = static_cast<std::uint32_t>(rng.uniform(num_vars));
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
      }
      bool fits = true;
      for (int j = 0; j < 3; ++j) {
        cl[j] = {vars[j], rng.coin()};
        if (occ[2 * cl[j].var + (cl[j].negated ? 1 : 0)] >= k_bound) fits = false;
      }
      if (!fits) continue;
      for (const auto& l : cl) ++occ[2 * l.var + (l.negated ? 1 : 0)];
      f.clauses.push_back(cl);
      placed = true;
    }
    if (!placed) throw ParameterError("cannot place clause under the literal bound");
  }
  return f;
}

// Every nonempty clause set over variables {0,1,2} with each literal used at most k times.
inline std::vector<Cnf3> all_cnfs_three_vars(std::uint32_t k_bound) {
  std::vector<Clause> pool;
  for (std::uint32_t s = 0; s < 8; ++s)
    pool.push_back({Literal{0, (s & 1U) != 0}, Literal{1, (s & 2U) != 0}, Literal{2, (s & 4U) != 0}});
  std::vector<Cnf3> out;
  for (std::uint32_t mask = 1; mask < 256; ++mask) {
    Cnf3 f{3, {}};
    for (std::uint32_t s = 0; s < 8; ++s)
      if ((mask >> s) & 1U) f.clauses.push_back(pool[s]);
    if (f.max_literal_occurrences() <= k_bound) out.push_back(std::move(f));
  }
  return out;
}

inline void validate_cnf(const Cnf3& f, std::uint32_t k_bound) {
  for (const auto& c : f.clauses) {
    for (const auto& l : c)
      if (l.var >= f.num_vars) throw ParameterError("malformed CNF: variable out of range");
    if (c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var)
      throw ParameterError("malformed CNF: clause variables must be distinct");
  }
  if (f.max_literal_occurrences() > k_bound) throw ParameterError("malformed CNF: literal bound exceeded");
}

// ---------------------------------------------------------------- 3-coloring construction

class GadgetBuilder {
 public:
  Vertex vertex() { return next_++; }
  void edge(Vertex a, Vertex b) { edges_.emplace_back(a, b); }

  // a - x - y - b with x, y adjacent to both ends and to each other:
  // forces color(a) == color(b) in every proper 3-coloring.
  void equality(Vertex a, Vertex b) {
    const Vertex x = vertex(), y = vertex();
    edge(x, y);
    edge(a, x);
    edge(a, y);
    edge(b, x);
    edge(b, y);
  }

  // Per literal j: an auxiliary vertex adjacent to the literal, to its
  // true-class vertex and to corner j of a fresh triangle.
  void clause(const std::array<Vertex, 3>& lit, const std::array<Vertex, 3>& truth) {
    std::array<Vertex, 3> corner{vertex(), vertex(), vertex()};
    edge(corner[0], corner[1]);
    edge(corner[1], corner[2]);
    edge(corner[0], corner[2]);
    for (int j = 0; j < 3; ++j) {
      const Vertex a = vertex();
      edge(a, lit[j]);
      edge(a, truth[j]);
      edge(a, corner[j]);
    }
  }

  std::size_t size() const { return next_; }
  Graph build() const { return make_plain(next_, edges_); }

 private:
  Vertex next_ = 0;
  std::vector<std::pair<Vertex, Vertex>> edges_;
};

// Exhaustive: every proper coloring of the equality gadget gives equal end colors,
// and every equal pair of end colors extends.
inline bool verify_equality_gadget() {
  GadgetBuilder b;
  const Vertex y1 = b.vertex(), y2 = b.vertex();
  b.equality(y1, y2);
  Graph g = b.build();
  std::array<int, 3> extendable{0, 0, 0};
  for (int code = 0; code < 81; ++code) {
    std::vector<std::uint8_t> col(4);
    int c = code;
    for (int i = 0; i < 4; ++i) {
      col[i] = static_cast<std::uint8_t>(c % 3);
      c /= 3;
    }
    if (!is_proper_coloring(g, col)) continue;
    if (col[y1] != col[y2]) return false;
    extendable[col[y1]] = 1;
  }
  return extendable[0] && extendable[1] && extendable[2];
}

// Exhaustive over literal colorings in {true, false}^3 with the true-class
// vertices fixed to the true color: an extension exists iff some literal is true.
inline bool verify_clause_gadget() {
  GadgetBuilder b;
  std::array<Vertex, 3> lit{b.vertex(), b.vertex(), b.vertex()};
  std::array<Vertex, 3> truth{b.vertex(), b.vertex(), b.vertex()};
  b.clause(lit, truth);
  Graph g = b.build();
  constexpr std::uint8_t kTrue = 1, kFalse = 2;
  for (int pattern = 0; pattern < 8; ++pattern) {
    bool extends = false;
    for (int code = 0; code < 729 && !extends; ++code) {
      std::vector<std::uint8_t> col(g.n());
      for (int j = 0; j < 3; ++j) {
        col[lit[j]] = ((pattern >> j) & 1) ? kTrue : kFalse;
        col[truth[j]] = kTrue;
      }
      int c = code;
      for (std::size_t v = 6; v < g.n(); ++v) {
        col[v] = static_cast<std::uint8_t>(c % 3);
        c /= 3;
      }
      extends = is_proper_coloring(g, col);
    }
    if (extends != (pattern != 0)) return false;
  }
  return true;
}

// |Gamma(S)| >= |S| for every S with |S| <= n/2, exhaustively.
inline bool vertex_expansion_exhaustive(const Graph& g) {
  const std::size_t n = g.n();
  if (n > 24) throw LimitError("exceeds brute-force limit (vertex expansion n)");
  std::vector<std::uint32_t> adj(n, 0);
  for (Vertex v = 0; v < n; ++v)
    for (auto w : g.neighbors(v)) adj[v] |= 1U << w;
  const std::uint32_t total = 1U << n;
  std::vector<std::uint32_t> gamma(total, 0);
  for (std::uint32_t s = 1; s < total; ++s) {
    gamma[s] = gamma[s & (s - 1)] | adj[std::countr_zero(s)];
    const auto size = static_cast<std::size_t>(std::popcount(s));
    if (2 * size <= n && std::popcount(gamma[s]) < static_cast<int>(size)) return false;
  }
  return true;
}

struct HardnessInstance {
  Graph graph;
  std::uint32_t k_bound = 0;
  std::uint32_t d_exp = 0;
  std::uint64_t d_prime = 0;  // degree bound from the construction
  std::size_t layer_size = 0;
  std::vector<Vertex> d_class, t_class, f_class;
  // literal_vertex[(2*var + negated) * k + copy]
  std::vector<Vertex> literal_vertex;
  bool layer_vertex_expansion_checked = false;
  Certificate layer_certificate;
  nlohmann::json diagnostics;
};

// Literal copy index for (var, negated, copy) in natural order.
inline std::size_t literal_index(std::uint32_t var, bool negated, std::uint32_t copy, std::uint32_t k) {
  return (2 * static_cast<std::size_t>(var) + (negated ? 1 : 0)) * k + copy;
}

inline HardnessInstance gen_hardness_3col(const Cnf3& f, std::uint32_t k_bound, std::uint32_t d_exp,
                                          std::uint64_t seed, const GenOptions& opt = {}) {
  validate_cnf(f, k_bound);
  if (k_bound < 1) throw ParameterError("k must be >= 1");
  const std::size_t layer = 2 * static_cast<std::size_t>(k_bound) * f.num_vars;
  HardnessInstance out;
  out.k_bound = k_bound;
  out.d_exp = d_exp;
  out.layer_size = layer;

  // Layer expander: certified random regular graph, with exhaustive vertex
  // expansion when small enough.
  GenOptions lopt = opt;
  lopt.phi_min = std::max(opt.phi_min, 1e-9);
  CertifiedGraph h;
  bool expansion_ok = false;
  for (int attempt = 0; attempt < opt.max_attempts && !expansion_ok; ++attempt) {
    h = gen_random_regular(layer, d_exp, mix64(seed + static_cast<std::uint64_t>(attempt)), lopt);
    expansion_ok = layer > 24 || vertex_expansion_exhaustive(h.graph);
  }
  if (!expansion_ok) throw LimitError("cannot certify expansion");
  out.layer_vertex_expansion_checked = layer <= 24;
  out.layer_certificate = h.certificate;

  GadgetBuilder b;
  for (std::size_t i = 0; i < layer; ++i) out.d_class.push_back(b.vertex());
  for (std::size_t i = 0; i < layer; ++i) out.t_class.push_back(b.vertex());
  for (std::size_t i = 0; i < layer; ++i) out.f_class.push_back(b.vertex());
  for (std::size_t i = 0; i < layer; ++i) {
    b.edge(out.d_class[i], out.t_class[i]);
    b.edge(out.t_class[i], out.f_class[i]);
    b.edge(out.d_class[i], out.f_class[i]);
  }
  for (const auto* cls : {&out.d_class, &out.t_class, &out.f_class})
    for (const auto& e : h.graph.edges()) b.equality((*cls)[e.u], (*cls)[e.v]);

  out.literal_vertex.resize(layer);
  for (auto& v : out.literal_vertex) v = b.vertex();
  for (std::uint32_t x = 0; x < f.num_vars; ++x) {
    for (int neg = 0; neg < 2; ++neg)
      for (std::uint32_t c1 = 0; c1 < k_bound; ++c1)
        for (std::uint32_t c2 = c1 + 1; c2 < k_bound; ++c2)
          b.equality(out.literal_vertex[literal_index(x, neg, c1, k_bound)],
                     out.literal_vertex[literal_index(x, neg, c2, k_bound)]);
    for (std::uint32_t c = 0; c < k_bound; ++c)
      b.edge(out.literal_vertex[literal_index(x, false, c, k_bound)],
             out.literal_vertex[literal_index(x, true, c, k_bound)]);
  }
  for (std::size_t i = 0; i < layer; ++i) b.edge(out.literal_vertex[i], out.d_class[i]);

  std::vector<std::uint32_t> used(2 * f.num_vars, 0);
  for (const auto& cl : f.clauses) {
    std::array<Vertex, 3> lit{}, truth{};
    for (int j = 0; j < 3; ++j) {
      const auto slot = 2 * cl[j].var + (cl[j].negated ? 1 : 0);
      const auto idx = literal_index(cl[j].var, cl[j].negated, used[slot]++, k_bound);
      lit[j] = out.literal_vertex[idx];
      truth[j] = out.t_class[idx];
    }
    b.clause(lit, truth);
  }
  out.graph = b.build();
  out.d_prime = std::max<std::uint64_t>(2ULL * d_exp + 3, 2ULL * k_bound + 1);
  out.diagnostics = {{"vertices", out.graph.n()},
                     {"edges", out.graph.m()},
                     {"layer_size", layer},
                     {"d_exp", d_exp},
                     {"k", k_bound},
                     {"max_degree", out.graph.max_degree()},
                     {"d_prime", out.d_prime},
                     {"literal_order", "literal (var, negated, copy) -> class index (2*var+negated)*k+copy"},
                     {"layer_vertex_expansion_exhaustive", out.layer_vertex_expansion_checked},
                     {"layer_certificate", to_json(h.certificate)}};
  return out;
}

// Colors the classes D=0, T=1, F=2 and each literal copy by the assignment
// (bit var set means true), then completes the gadget interiors exactly.
inline std::optional<std::vector<std::uint8_t>> hardness_coloring(const HardnessInstance& h, const Cnf3& f,
                                                                  std::uint64_t assignment,
                                                                  const BruteForceLimits& lim = {}) {
  std::vector<std::uint8_t> fixed(h.graph.n(), 3);
  for (std::size_t i = 0; i < h.layer_size; ++i) {
    fixed[h.d_class[i]] = 0;
    fixed[h.t_class[i]] = 1;
    fixed[h.f_class[i]] = 2;
  }
  for (std::uint32_t x = 0; x < f.num_vars; ++x)
    for (int neg = 0; neg < 2; ++neg)
      for (std::uint32_t c = 0; c < h.k_bound; ++c) {
        const bool value = ((assignment >> x) & 1U) != (neg == 1);
        fixed[h.literal_vertex[literal_index(x, neg, c, h.k_bound)]] = value ? 1 : 2;
      }
  return exact_3coloring(h.graph, lim, fixed);
}


// Decides 3-colorability of psi(f) through its structure: the equality gadgets
// over the connected layer make each class monochromatic and the class
// triangles make the three class colors distinct, so up to renaming D=0, T=1,
// F=2. Literal copies then take T or F, copies agree and complements differ,
// so the colorings are exactly the completions of some assignment.
inline std::optional<std::vector<std::uint8_t>> hardness_3coloring(const HardnessInstance& h, const Cnf3& f,
                                                                   const BruteForceLimits& lim = {}) {
  if (f.num_vars > lim.sat_vars) throw LimitError("exceeds brute-force limit (sat vars)");
  if (!(h.layer_certificate.phi_lower > 0)) throw LimitError("layer expander is not certified connected");
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << f.num_vars); ++a)
    if (auto c = hardness_coloring(h, f, a, lim)) return c;
  return std::nullopt;
}

}  // namespace sublin
