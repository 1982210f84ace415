#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sublin/cnf.hpp"
#include "sublin/errors.hpp"
#include "sublin/graph.hpp"
#include "sublin/spectral.hpp"

namespace sublin {

struct BruteForceLimits {
  std::size_t conductance_n = 20;
  std::size_t rho_n = 12;
  std::size_t bipartiteness_n = 13;
  std::size_t maxcut_n = 24;
  double label_space = 1e7;
  std::size_t coloring_n = 1024;
  std::size_t sat_vars = 20;
  std::size_t dual_cheeger_n = 10;
};

inline void check_limit(std::size_t n, std::size_t limit, const char* what) {
  if (n > limit)
    throw LimitError(std::string("exceeds brute-force limit (") + what + ": " + std::to_string(n) + " > " +
                     std::to_string(limit) + ")");
}

// ---------------------------------------------------------------- walks

struct ParityDistributions {
  std::vector<double> even;
  std::vector<double> odd;
};

// Lazy walk from v for t steps, split by the parity of the number of moves.
inline ParityDistributions exact_walk_distributions(const Graph& g, Vertex v, std::size_t t) {
  const std::size_t n = g.n();
  ParityDistributions cur{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  cur.even[v] = 1.0;
  ParityDistributions next{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t step = 0; step < t; ++step) {
    for (std::size_t u = 0; u < n; ++u) {
      next.even[u] = 0.5 * cur.even[u];
      next.odd[u] = 0.5 * cur.odd[u];
    }
    for (Vertex u = 0; u < n; ++u) {
      const double w = 0.5 / g.degree(u);
      const double me = cur.even[u] * w, mo = cur.odd[u] * w;
      if (me == 0.0 && mo == 0.0) continue;
      for (auto x : g.neighbors(u)) {
        next.odd[x] += me;
        next.even[x] += mo;
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

// q_v^t = 1_v M^t with M = (I - D^{-1} A) / 2.
inline std::vector<double> signed_walk(const Graph& g, Vertex v, std::size_t t) {
  const std::size_t n = g.n();
  std::vector<double> cur(n, 0.0), next(n);
  cur[v] = 1.0;
  for (std::size_t step = 0; step < t; ++step) {
    for (std::size_t u = 0; u < n; ++u) next[u] = 0.5 * cur[u];
    for (Vertex u = 0; u < n; ++u) {
      if (cur[u] == 0.0) continue;
      const double w = 0.5 * cur[u] / g.degree(u);
      for (auto x : g.neighbors(u)) next[x] -= w;
    }
    std::swap(cur, next);
  }
  return cur;
}

inline double degree_weighted_norm2(const Graph& g, const std::vector<double>& x) {
  double s = 0;
  for (Vertex u = 0; u < g.n(); ++u) s += x[u] * x[u] / g.degree(u);
  return s;
}

inline double exact_delta(const Graph& g, Vertex v, std::size_t t) {
  return degree_weighted_norm2(g, signed_walk(g, v, t));
}

// ||p_v^t D^{-1/2}||^2 for the lazy walk distribution.
inline double exact_walk_norm(const Graph& g, Vertex v, std::size_t t) {
  auto p = exact_walk_distributions(g, v, t);
  std::vector<double> s(g.n());
  for (std::size_t u = 0; u < g.n(); ++u) s[u] = p.even[u] + p.odd[u];
  return degree_weighted_norm2(g, s);
}

// ---------------------------------------------------------------- subsets

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator<(const Fraction& o) const {
    return static_cast<unsigned __int128>(num) * o.den < static_cast<unsigned __int128>(o.num) * den;
  }
  bool operator<=(const Fraction& o) const { return !(o < *this); }
  bool operator==(const Fraction& o) const {
    return static_cast<unsigned __int128>(num) * o.den == static_cast<unsigned __int128>(o.num) * den;
  }
};

// Visits every nonempty subset in Gray-code order with its cut size and volume.
template <class F>
void for_each_subset(const Graph& g, F&& visit) {
  const std::size_t n = g.n();
  std::uint64_t mask = 0, cut = 0, vol = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto x = static_cast<Vertex>(std::countr_zero(i));
    std::int64_t nonloop = 0, ins = 0;
    for (auto w : g.neighbors(x)) {
      if (w == x) continue;
      ++nonloop;
      if ((mask >> w) & 1U) ++ins;
    }
    const std::int64_t delta = nonloop - 2 * ins;
    if ((mask >> x) & 1U) {
      mask &= ~(std::uint64_t{1} << x);
      cut = static_cast<std::uint64_t>(static_cast<std::int64_t>(cut) - delta);
      vol -= g.degree(x);
    } else {
      mask |= std::uint64_t{1} << x;
      cut = static_cast<std::uint64_t>(static_cast<std::int64_t>(cut) + delta);
      vol += g.degree(x);
    }
    visit(mask, cut, vol);
  }
}

struct ConductanceResult {
  double value = 0;
  Fraction exact;
  std::uint64_t set = 0;
};

// min over nonempty proper S with mu(S) <= mu/k of e(S, V\S)/mu(S).
inline ConductanceResult exact_conductance_profile(const Graph& g, std::uint32_t k,
                                                   const BruteForceLimits& lim = {}) {
  check_limit(g.n(), lim.conductance_n, "conductance n");
  if (k < 1) throw ParameterError("k must be >= 1");
  const std::uint64_t mu = g.volume();
  const std::uint64_t full = (std::uint64_t{1} << g.n()) - 1;
  bool found = false;
  ConductanceResult best;
  for_each_subset(g, [&](std::uint64_t mask, std::uint64_t cut, std::uint64_t vol) {
    if (mask == full || vol * k > mu) return;
    Fraction f{cut, vol};
    if (!found || f < best.exact) {
      best.exact = f;
      best.set = mask;
      found = true;
    }
  });
  if (!found) throw ParameterError("no subset satisfies the volume bound");
  best.value = best.exact.value();
  return best;
}

inline double exact_conductance(const Graph& g, const BruteForceLimits& lim = {}) {
  return exact_conductance_profile(g, 2, lim).value;
}

// Conductance of an explicit set: e(S, V\S)/mu(S).
inline double set_conductance(const Graph& g, const std::vector<char>& in_set) {
  std::uint64_t cut = 0, vol = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!in_set[v]) continue;
    vol += g.degree(v);
    for (auto w : g.neighbors(v))
      if (!in_set[w]) ++cut;
  }
  return vol == 0 ? 0.0 : static_cast<double>(cut) / static_cast<double>(vol);
}

// min over k disjoint nonempty sets of the largest conductance among them.
inline double exact_rho(const Graph& g, std::uint32_t k, const BruteForceLimits& lim = {}) {
  check_limit(g.n(), lim.rho_n, "rho n");
  const std::size_t n = g.n();
  if (k < 1 || k > n) throw ParameterError("k must be in [1, n]");
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<Fraction> phi(total);
  for_each_subset(g, [&](std::uint64_t mask, std::uint64_t cut, std::uint64_t vol) { phi[mask] = {cut, vol}; });
  std::vector<Fraction> values(phi.begin() + 1, phi.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  auto feasible = [&](const Fraction& tau) {
    std::vector<char> good(total, 0), any_good(total, 0);
    for (std::uint64_t s = 1; s < total; ++s) good[s] = phi[s] <= tau;
    for (std::uint64_t s = 1; s < total; ++s) {
      any_good[s] = good[s];
      for (std::uint64_t b = s; b && !any_good[s]; b &= b - 1) any_good[s] = any_good[s & ~(b & -b)];
    }
    std::map<std::pair<std::uint32_t, std::uint64_t>, bool> memo;
    std::function<bool(std::uint32_t, std::uint64_t)> search = [&](std::uint32_t parts, std::uint64_t avail) {
      if (parts == 0) return true;
      if (parts == 1) return static_cast<bool>(any_good[avail]);
      if (static_cast<std::uint32_t>(std::popcount(avail)) < parts) return false;
      auto key = std::make_pair(parts, avail);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      const std::uint64_t low = avail & -avail;
      bool ok = search(parts, avail & ~low);
      const std::uint64_t rest = avail & ~low;
      for (std::uint64_t t = rest;; t = (t - 1) & rest) {
        const std::uint64_t s = t | low;
        if (good[s] && search(parts - 1, avail & ~s)) {
          ok = true;
          break;
        }
        if (t == 0) break;
      }
      memo[key] = ok;
      return ok;
    };
    return search(k, total - 1);
  };

  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(values[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return values[lo].value();
}

namespace detail {

// For every nonempty S: the largest e(L, S\L) over L subset of S.
inline std::vector<std::uint64_t> best_inner_cut(const Graph& g) {
  const std::size_t n = g.n();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::vector<std::uint32_t>> mult(n, std::vector<std::uint32_t>(n, 0));
  for (Vertex v = 0; v < n; ++v)
    for (auto w : g.neighbors(v)) ++mult[v][w];
  std::vector<std::uint64_t> best(total, 0);
  for (std::uint64_t s = 1; s < total; ++s) {
    // L ranges over subsets of S containing the lowest vertex of S.
    const std::uint64_t low = s & -s;
    const std::uint64_t rest = s & ~low;
    std::uint64_t b = 0;
    for (std::uint64_t t = rest;; t = (t - 1) & rest) {
      const std::uint64_t l = t | low;
      const std::uint64_t r = s & ~l;
      std::uint64_t e = 0;
      for (std::uint64_t x = l; x; x &= x - 1) {
        const auto v = std::countr_zero(x);
        for (std::uint64_t y = r; y; y &= y - 1) e += mult[v][std::countr_zero(y)];
      }
      b = std::max(b, e);
      if (t == 0) break;
    }
    best[s] = b;
  }
  return best;
}

inline std::vector<std::uint64_t> subset_volumes(const Graph& g) {
  const std::uint64_t total = std::uint64_t{1} << g.n();
  std::vector<std::uint64_t> vol(total, 0);
  for (std::uint64_t s = 1; s < total; ++s) {
    const auto v = std::countr_zero(s);
    vol[s] = vol[s & (s - 1)] + g.degree(static_cast<Vertex>(v));
  }
  return vol;
}

}  // namespace detail

// min over disjoint L, R with L u R nonempty of (2e(L)+2e(R)+e(L u R, rest)) / mu(L u R),
// which equals 1 - 2 e(L,R) / mu(L u R).
inline double exact_bipartiteness_ratio(const Graph& g, const BruteForceLimits& lim = {}) {
  check_limit(g.n(), lim.bipartiteness_n, "bipartiteness n");
  auto inner = detail::best_inner_cut(g);
  auto vol = detail::subset_volumes(g);
  Fraction best{1, 1};
  for (std::uint64_t s = 1; s < inner.size(); ++s) {
    Fraction f{vol[s] - 2 * inner[s], vol[s]};
    if (f < best) best = f;
  }
  return best.value();
}

// Dual Cheeger constant for k = 2: max over two disjoint nonempty sets of
// min_i 2e(L_i, R_i)/mu(L_i u R_i).
inline double exact_dual_cheeger2(const Graph& g, const BruteForceLimits& lim = {}) {
  check_limit(g.n(), lim.dual_cheeger_n, "dual cheeger n");
  auto inner = detail::best_inner_cut(g);
  auto vol = detail::subset_volumes(g);
  const std::uint64_t total = inner.size();
  std::vector<Fraction> h(total);
  for (std::uint64_t s = 1; s < total; ++s) h[s] = {2 * inner[s], vol[s]};
  Fraction best{0, 1};
  for (std::uint64_t s1 = 1; s1 < total; ++s1) {
    const std::uint64_t rest = (total - 1) & ~s1;
    for (std::uint64_t s2 = rest; s2; s2 = (s2 - 1) & rest) {
      const Fraction m = h[s1] < h[s2] ? h[s1] : h[s2];
      if (best < m) best = m;
    }
  }
  return best.value();
}

struct MaxCutResult {
  double value = 0;  // fraction of edges cut
  std::uint64_t cut = 0;
  std::uint64_t side = 0;  // bitmask of one side
};

inline MaxCutResult exact_maxcut(const Graph& g, const BruteForceLimits& lim = {}) {
  check_limit(g.n(), lim.maxcut_n, "maxcut n");
  MaxCutResult best;
  if (g.m() == 0) return best;
  if (g.n() == 1) return {0.0, 0, 0};
  // Vertex n-1 stays outside; enumerate the other n-1 memberships.
  const std::size_t bits = g.n() - 1;
  std::uint64_t mask = 0, cut = 0;
  const std::uint64_t total = std::uint64_t{1} << bits;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto x = static_cast<Vertex>(std::countr_zero(i));
    std::int64_t nonloop = 0, ins = 0;
    for (auto w : g.neighbors(x)) {
      if (w == x) continue;
      ++nonloop;
      if ((mask >> w) & 1U) ++ins;
    }
    const std::int64_t delta = nonloop - 2 * ins;
    if ((mask >> x) & 1U) {
      mask &= ~(std::uint64_t{1} << x);
      cut = static_cast<std::uint64_t>(static_cast<std::int64_t>(cut) - delta);
    } else {
      mask |= std::uint64_t{1} << x;
      cut = static_cast<std::uint64_t>(static_cast<std::int64_t>(cut) + delta);
    }
    if (cut > best.cut) {
      best.cut = cut;
      best.side = mask;
    }
  }
  best.value = static_cast<double>(best.cut) / static_cast<double>(g.m());
  return best;
}

// Fraction of edges whose constraint is satisfied by the labeling.
inline double satisfied_fraction(const Graph& g, const std::vector<std::uint32_t>& label) {
  std::uint64_t ok = 0;
  for (const auto& e : g.edges()) ok += g.satisfied(e.u, e.slot, label[e.u], label[e.v]) ? 1 : 0;
  return g.m() == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(g.m());
}

struct LabelOptimum {
  double value = 0;
  std::uint64_t satisfied = 0;
  std::vector<std::uint32_t> labels;
};

// Exhaustive optimum over all q^n labelings of an e2lin or ulc instance.
inline LabelOptimum exact_opt_labels(const Graph& g, const BruteForceLimits& lim = {}) {
  if (g.kind() == Annotation::plain) throw ParameterError("instance carries no constraints");
  const std::size_t n = g.n();
  const std::uint32_t q = g.q();
  if (std::pow(static_cast<double>(q), static_cast<double>(n)) > lim.label_space)
    throw LimitError("exceeds brute-force limit (q^n > label space)");
  std::vector<std::uint32_t> lab(n, 0);
  std::uint64_t sat = 0;
  for (const auto& e : g.edges()) sat += g.satisfied(e.u, e.slot, 0, 0) ? 1 : 0;
  LabelOptimum best{0, sat, lab};
  // Contribution of vertex x's incident non-loop slots.
  auto local = [&](Vertex x) {
    std::uint64_t c = 0;
    for (std::uint32_t i = 0; i < g.degree(x); ++i) {
      const auto s = g.slot(x, i);
      const auto y = g.target(s);
      if (y == x) continue;
      c += g.satisfied(x, s, lab[x], lab[y]) ? 1 : 0;
    }
    return c;
  };
  for (;;) {
    std::size_t pos = 0;
    while (pos < n) {
      const auto before = local(static_cast<Vertex>(pos));
      lab[pos] = (lab[pos] + 1) % q;
      sat = sat - before + local(static_cast<Vertex>(pos));
      if (lab[pos] != 0) break;
      ++pos;
    }
    if (pos == n) break;
    if (sat > best.satisfied) {
      best.satisfied = sat;
      best.labels = lab;
      if (sat == g.m()) break;
    }
  }
  best.value = g.m() == 0 ? 1.0 : static_cast<double>(best.satisfied) / static_cast<double>(g.m());
  return best;
}

inline double exact_opt_e2lin(const Graph& g, const BruteForceLimits& lim = {}) {
  if (g.kind() != Annotation::e2lin) throw ParameterError("not an e2lin instance");
  return exact_opt_labels(g, lim).value;
}

inline double exact_opt_ulc(const Graph& g, const BruteForceLimits& lim = {}) {
  if (g.kind() != Annotation::ulc) throw ParameterError("not a ulc instance");
  return exact_opt_labels(g, lim).value;
}

// ---------------------------------------------------------------- coloring / sat

namespace detail {

inline bool color_conflict_free(const Graph& g, const std::vector<std::uint8_t>& color, Vertex v) {
  for (auto w : g.neighbors(v))
    if (color[w] == color[v]) return false;
  return true;
}

}  // namespace detail

// Backtracking 3-coloring: most constrained vertex first, forward checking.
// `fixed` (color per vertex, 3 = free) pins some vertices in advance.
inline std::optional<std::vector<std::uint8_t>> exact_3coloring(const Graph& g, const BruteForceLimits& lim = {},
                                                                const std::vector<std::uint8_t>& fixed = {}) {
  check_limit(g.n(), lim.coloring_n, "coloring n");
  const std::size_t n = g.n();
  for (Vertex v = 0; v < n; ++v)
    for (auto w : g.neighbors(v))
      if (w == v) return std::nullopt;
  std::vector<std::uint8_t> domain(n, 0b111), color(n, 3);
  struct Change {
    Vertex v;
    std::uint8_t old;
  };
  std::vector<Change> trail;
  bool symmetric = true;
  if (!fixed.empty()) {
    if (fixed.size() != n) throw ParameterError("fixed coloring size mismatch");
    for (Vertex v = 0; v < n; ++v) {
      if (fixed[v] == 3) continue;
      if (fixed[v] > 3 || !((domain[v] >> fixed[v]) & 1U)) return std::nullopt;
      color[v] = fixed[v];
      symmetric = false;
      for (auto w : g.neighbors(v)) domain[w] &= static_cast<std::uint8_t>(~(1U << fixed[v]));
    }
    for (Vertex v = 0; v < n; ++v)
      if (color[v] != 3 && !detail::color_conflict_free(g, color, v)) return std::nullopt;
  }

  // Free vertices split into components joined only through colored
  // vertices; each component is searched on its own.
  std::vector<int> comp_of(n, -1);
  std::vector<std::vector<Vertex>> comps;
  for (Vertex s = 0; s < n; ++s) {
    if (color[s] != 3 || comp_of[s] >= 0) continue;
    comps.emplace_back();
    std::vector<Vertex> stack = {s};
    comp_of[s] = static_cast<int>(comps.size() - 1);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      comps.back().push_back(v);
      for (auto w : g.neighbors(v))
        if (color[w] == 3 && comp_of[w] < 0) {
          comp_of[w] = comp_of[s];
          stack.push_back(w);
        }
    }
  }

  const std::vector<Vertex>* comp = nullptr;
  std::size_t left = 0;
  std::function<bool()> solve = [&]() -> bool {
    if (left == 0) return true;
    Vertex pick = 0;
    int best_size = 4;
    std::uint32_t best_deg = 0;
    for (Vertex v : *comp) {
      if (color[v] != 3) continue;
      const int sz = std::popcount(domain[v]);
      if (sz < best_size || (sz == best_size && g.degree(v) > best_deg)) {
        pick = v;
        best_size = sz;
        best_deg = g.degree(v);
      }
    }
    if (best_size == 0) return false;
    // Colors are interchangeable until the first assignment of a component.
    const std::uint8_t dom = symmetric && left == comp->size() ? std::uint8_t{1} : domain[pick];
    for (std::uint8_t c = 0; c < 3; ++c) {
      if (!((dom >> c) & 1U)) continue;
      const std::size_t mark = trail.size();
      color[pick] = c;
      --left;
      bool dead = false;
      for (auto w : g.neighbors(pick)) {
        if (color[w] != 3) continue;
        if ((domain[w] >> c) & 1U) {
          trail.push_back({w, domain[w]});
          domain[w] &= static_cast<std::uint8_t>(~(1U << c));
          if (domain[w] == 0) dead = true;
        }
      }
      if (!dead && solve()) return true;
      while (trail.size() > mark) {
        domain[trail.back().v] = trail.back().old;
        trail.pop_back();
      }
      color[pick] = 3;
      ++left;
    }
    return false;
  };
  for (const auto& c : comps) {
    comp = &c;
    left = c.size();
    if (!solve()) return std::nullopt;
  }
  return color;
}

inline bool exact_3colorable(const Graph& g, const BruteForceLimits& lim = {}) {
  return exact_3coloring(g, lim).has_value();
}

inline bool is_proper_coloring(const Graph& g, const std::vector<std::uint8_t>& color) {
  for (const auto& e : g.edges())
    if (color[e.u] == color[e.v]) return false;
  return true;
}

inline std::optional<std::uint64_t> sat_brute_assignment(const Cnf3& f, const BruteForceLimits& lim = {}) {
  check_limit(f.num_vars, lim.sat_vars, "sat variables");
  const std::uint64_t total = std::uint64_t{1} << f.num_vars;
  for (std::uint64_t a = 0; a < total; ++a)
    if (f.satisfied_by(a)) return a;
  return std::nullopt;
}

inline bool sat_brute(const Cnf3& f, const BruteForceLimits& lim = {}) {
  return sat_brute_assignment(f, lim).has_value();
}

}  // namespace sublin
