// Test-only reference implementations, independent of the library code
// paths they audit.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ergkit/graph_core.hpp"

namespace oracles {

// Central five-point second derivative.
inline double fd_second_derivative(const std::function<double(double)>& f,
                                   double x, double step) {
  return (-f(x + 2 * step) + 16 * f(x + step) - 30 * f(x) + 16 * f(x - step) -
          f(x - 2 * step)) /
         (12 * step * step);
}

inline double fd_first_derivative(const std::function<double(double)>& f,
                                  double x, double step) {
  return (f(x - 2 * step) - 8 * f(x - step) + 8 * f(x + step) -
          f(x + 2 * step)) /
         (12 * step);
}

// Counts adjacency-preserving maps V(H) -> V(G) by full enumeration.
// Edges of H given on vertices 0..h_verts-1.
inline std::int64_t hom_count_all_maps(
    const std::vector<std::pair<int, int>>& h_edges, int h_verts,
    const ergkit::AdjacencyState& g) {
  const int n = g.n();
  std::int64_t total = 0;
  std::vector<int> map(static_cast<std::size_t>(h_verts), 0);
  while (true) {
    bool ok = true;
    for (const auto& [u, v] : h_edges) {
      const int gu = map[static_cast<std::size_t>(u)];
      const int gv = map[static_cast<std::size_t>(v)];
      if (gu == gv || !g.has_edge(gu, gv)) {
        ok = false;
        break;
      }
    }
    if (ok) ++total;
    int pos = h_verts - 1;
    while (pos >= 0 && map[static_cast<std::size_t>(pos)] == n - 1) {
      map[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++map[static_cast<std::size_t>(pos)];
  }
  return total;
}

// Brute-force common neighbours via explicit set intersection.
inline int common_neighbors_naive(const ergkit::AdjacencyState& g, int a,
                                  int b) {
  int count = 0;
  for (int k = 0; k < g.n(); ++k) {
    if (k != a && k != b && g.has_edge(a, k) && g.has_edge(b, k)) ++count;
  }
  return count;
}

// E[f(K)] for K ~ Binomial(N, q), direct long double summation.
inline long double binomial_expect(
    int N, long double q, const std::function<long double(int)>& f) {
  long double total = 0.0L;
  for (int k = 0; k <= N; ++k) {
    long double logp = 0.0L;
    for (int i = 0; i < k; ++i) {
      logp += std::log((long double)(N - i)) - std::log((long double)(i + 1));
    }
    logp += k * std::log(q) + (N - k) * std::log(1.0L - q);
    total += std::exp(logp) * f(k);
  }
  return total;
}

}  // namespace oracles
