#pragma once

#include <vector>

#include "latinmate/matching.hpp"
#include "latinmate/random.hpp"

namespace testutil {

// Row distribution with columns of random positive weights, some entries
// zeroed with probability `holes`, then normalized per symbol.
inline latinmate::RowDistribution<double> random_row_distribution(int n, latinmate::Rng& rng,
                                                                  double holes = 0.0) {
  latinmate::RowDistribution<double> d{latinmate::SquareMatrix<double>(n)};
  for (int g = 0; g < n; ++g) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      double v = latinmate::uniform01(rng);
      if (latinmate::uniform01(rng) < holes) v = 0.0;
      d.w(k, g) = v;
      sum += v;
    }
    if (sum == 0.0) {
      const int k = static_cast<int>(latinmate::uniform_below(rng, n));
      d.w(k, g) = sum = 1.0;
    }
    for (int k = 0; k < n; ++k) d.w(k, g) /= sum;
  }
  return d;
}

// Convex combination of `terms` random permutation matrices.
inline latinmate::SquareMatrix<double> random_doubly_stochastic(int n, int terms,
                                                               latinmate::Rng& rng) {
  latinmate::SquareMatrix<double> m(n);
  std::vector<double> c(terms);
  double total = 0.0;
  for (auto& x : c) total += (x = 0.05 + latinmate::uniform01(rng));
  std::vector<int> perm(n);
  for (int i = 0; i < terms; ++i) {
    for (int k = 0; k < n; ++k) perm[k] = k;
    latinmate::shuffle(perm, rng);
    for (int k = 0; k < n; ++k) m(k, perm[k]) += c[i] / total;
  }
  return m;
}

}  // namespace testutil
