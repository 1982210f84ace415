#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sublin/generators.hpp"
#include "sublin/graph.hpp"
#include "sublin/rng.hpp"
#include "sublin/spectral.hpp"

namespace sublin {

struct CorpusGraph {
  std::string name;
  Graph graph;
};

// Connected G(n, p), resampled until connected.
inline Graph random_connected_gnp(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<std::pair<Vertex, Vertex>> e;
    std::vector<int> deg(n, 0);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (rng.uniform01() < p) {
          e.emplace_back(u, v);
          ++deg[u];
          ++deg[v];
        }
    if (std::find(deg.begin(), deg.end(), 0) != deg.end()) continue;
    Graph g = make_plain(n, e);
    if (is_connected(g)) return g;
  }
  throw LimitError("cannot draw a connected graph");
}

// The shipped small-graph corpus (all connected, n <= n_max).
inline std::vector<CorpusGraph> small_corpus(std::size_t n_max = 13) {
  std::vector<CorpusGraph> out;
  auto add = [&](std::string name, Graph g) {
    if (g.n() <= n_max) out.push_back({std::move(name), std::move(g)});
  };
  for (std::size_t n = 3; n <= 7; ++n) add("K" + std::to_string(n), named::complete(n));
  for (std::size_t n = 4; n <= 13; ++n) add("C" + std::to_string(n), named::cycle(n));
  add("K3,3", named::complete_bipartite(3, 3));
  add("K2,4", named::complete_bipartite(2, 4));
  add("K4,4", named::complete_bipartite(4, 4));
  add("petersen", named::petersen());
  add("barbell", named::barbell_triangles());
  add("star5", named::star(5));
  add("path6", named::path(6));
  for (std::size_t n : {6, 8, 10, 12})
    for (std::uint32_t d : {3U, 4U, 5U}) {
      if (d >= n) continue;
      for (std::uint64_t s = 1; s <= 3; ++s)
        add("regular-" + std::to_string(n) + "-" + std::to_string(d) + "-s" + std::to_string(s),
            gen_random_regular(n, d, 1000 * n + 10 * d + s).graph);
    }
  for (std::size_t n : {7, 9, 11, 13})
    for (double p : {0.35, 0.6})
      for (std::uint64_t s = 1; s <= 2; ++s)
        add("gnp-" + std::to_string(n) + "-" + std::to_string(static_cast<int>(p * 100)) + "-s" + std::to_string(s),
            random_connected_gnp(n, p, 7000 * n + static_cast<std::uint64_t>(p * 100) + s));
  for (std::size_t n : {8, 10, 12})
    for (double eps : {0.0, 0.1, 0.25})
      for (std::uint64_t s = 1; s <= 2; ++s) {
        auto p = gen_planted_maxcut(n, 3, eps, 9000 * n + static_cast<std::uint64_t>(eps * 100) + s);
        if (is_connected(p.graph))
          add("planted-" + std::to_string(n) + "-" + std::to_string(static_cast<int>(eps * 100)) + "-s" +
                  std::to_string(s),
              std::move(p.graph));
      }
  return out;
}

}  // namespace sublin
