#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

// Pearson statistic against expected probabilities (cells with zero
// probability must stay empty).
inline double chi_square(const std::vector<std::uint64_t>& counts, const std::vector<double>& probs) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  double x = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] <= 0) {
      if (counts[i] > 0) return INFINITY;
      continue;
    }
    const double e = total * probs[i];
    x += (counts[i] - e) * (counts[i] - e) / e;
  }
  return x;
}

// Upper 1% point of chi-square with k degrees of freedom (Wilson-Hilferty).
inline double chi_square_crit_01(double k) {
  const double z = 2.326347874;
  const double a = 2.0 / (9.0 * k);
  return k * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}
