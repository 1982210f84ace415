#pragma once

#include <cstdint>
#include <stdexcept>

#include "sublin/oracle.hpp"
#include "sublin/rng.hpp"

namespace sublin {

enum class Parity { even = 0, odd = 1 };

struct WalkOutcome {
  Vertex endpoint;
  Parity hop_parity;
  std::size_t steps_taken;
};

// Lazy walk: each step stays with probability 1/2, otherwise moves to a
// uniform neighbor (one degree query, one neighbor query).
template <AdjacencyOracle O>
WalkOutcome lazy_walk(const O& oracle, Vertex v, std::size_t steps, Rng& rng) {
  Vertex cur = v;
  unsigned hops = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    if (rng.coin()) continue;
    const auto d = oracle.degree(cur);
    cur = oracle.neighbor(cur, static_cast<std::uint32_t>(rng.uniform(d))).vertex;
    hops ^= 1U;
  }
  return {cur, hops ? Parity::odd : Parity::even, steps};
}

inline constexpr int kMaxParityAttempts = 200;

// Endpoint of a lazy walk conditioned on the hop parity, by rejection.
template <AdjacencyOracle O>
Vertex sample_parity_conditioned(const O& oracle, Vertex v, std::size_t steps, Parity parity, Rng& rng) {
  if (steps == 0) throw std::invalid_argument("walk length must be >= 1");
  for (int attempt = 0; attempt < kMaxParityAttempts; ++attempt) {
    auto out = lazy_walk(oracle, v, steps, rng);
    if (out.hop_parity == parity) return out.endpoint;
  }
  throw std::logic_error("parity-conditioned sampling exceeded its attempt cap");
}

}  // namespace sublin
