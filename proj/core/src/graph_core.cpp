#include "ergkit/graph_core.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "ergkit/rng.hpp"

namespace ergkit {

AdjacencyState::AdjacencyState(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 3) throw std::domain_error("graph needs at least 3 vertices");
  bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

AdjacencyState AdjacencyState::complete(int n) {
  AdjacencyState g(n);
  for (int v = 0; v < n; ++v) {
    auto* row = g.bits_.data() + static_cast<std::size_t>(v) * g.words_;
    for (int u = 0; u < n; ++u) {
      if (u != v) row[u >> 6] |= 1ULL << (u & 63);
    }
  }
  g.edges_ = static_cast<std::int64_t>(n) * (n - 1) / 2;
  g.triangles_ = static_cast<std::int64_t>(n) * (n - 1) * (n - 2) / 6;
  return g;
}

AdjacencyState AdjacencyState::bernoulli(int n, double p, std::uint64_t seed) {
  AdjacencyState g(n);
  Xoshiro256pp rng(seed);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.uniform01() < p) g.flip_edge(a, b);
    }
  }
  return g;
}

void AdjacencyState::check_pair(int a, int b) const {
  if (a == b) throw std::invalid_argument("self-loops are not representable");
  if (a < 0 || b < 0 || a >= n_ || b >= n_) {
    throw std::invalid_argument("vertex index out of range");
  }
}

bool AdjacencyState::has_edge(int a, int b) const {
  check_pair(a, b);
  return (bits_[static_cast<std::size_t>(a) * words_ + (b >> 6)] >>
          (b & 63)) &
         1ULL;
}

int AdjacencyState::common_neighbor_count(int a, int b) const {
  check_pair(a, b);
  const auto* ra = bits_.data() + static_cast<std::size_t>(a) * words_;
  const auto* rb = bits_.data() + static_cast<std::size_t>(b) * words_;
  int count = 0;
  for (int w = 0; w < words_; ++w) count += std::popcount(ra[w] & rb[w]);
  // The diagonal is zero, so neither a nor b can appear in the
  // intersection; no mask needed.
  return count;
}

AdjacencyState::FlipDelta AdjacencyState::flip_edge(int a, int b) {
  const int w = common_neighbor_count(a, b);
  const bool was_present = has_edge(a, b);
  bits_[static_cast<std::size_t>(a) * words_ + (b >> 6)] ^= 1ULL << (b & 63);
  bits_[static_cast<std::size_t>(b) * words_ + (a >> 6)] ^= 1ULL << (a & 63);
  FlipDelta delta{};
  if (was_present) {
    delta.edge_delta = -1;
    delta.triangle_delta = -w;
  } else {
    delta.edge_delta = +1;
    delta.triangle_delta = +w;
  }
  edges_ += delta.edge_delta;
  triangles_ += delta.triangle_delta;
  return delta;
}

void AdjacencyState::set_edge(int a, int b, bool present) {
  if (has_edge(a, b) != present) flip_edge(a, b);
}

int AdjacencyState::degree(int v) const {
  const auto* row = bits_.data() + static_cast<std::size_t>(v) * words_;
  int d = 0;
  for (int w = 0; w < words_; ++w) d += std::popcount(row[w]);
  return d;
}

std::int64_t AdjacencyState::recount_edges() const {
  std::int64_t total = 0;
  for (int v = 0; v < n_; ++v) total += degree(v);
  return total / 2;
}

std::int64_t AdjacencyState::recount_triangles() const {
  // Sum of common-neighbor counts over edges counts every triangle three
  // times (equivalently trace(A^3)/6).
  std::int64_t total = 0;
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) {
      if (has_edge(a, b)) total += common_neighbor_count(a, b);
    }
  }
  return total / 3;
}

bool AdjacencyState::operator==(const AdjacencyState& other) const {
  return n_ == other.n_ && bits_ == other.bits_ && edges_ == other.edges_ &&
         triangles_ == other.triangles_;
}

namespace {

std::int64_t clique_extend(const AdjacencyState& g,
                           std::vector<std::uint64_t>& cand, int depth,
                           int last, int remaining) {
  const int n = g.n();
  const int words = static_cast<int>(g.row(0).size());
  std::int64_t total = 0;
  auto* mask = cand.data() + static_cast<std::size_t>(depth) * words;
  for (int v = last + 1; v < n; ++v) {
    if (!((mask[v >> 6] >> (v & 63)) & 1ULL)) continue;
    if (remaining == 1) {
      ++total;
      continue;
    }
    auto* next = cand.data() + static_cast<std::size_t>(depth + 1) * words;
    const auto rv = g.row(v);
    for (int w = 0; w < words; ++w) next[w] = mask[w] & rv[w];
    total += clique_extend(g, cand, depth + 1, v, remaining - 1);
  }
  return total;
}

}  // namespace

std::int64_t clique_count(const AdjacencyState& g, int ell) {
  if (ell < 3 || ell > 5) throw std::domain_error("clique size must be in [3,5]");
  if (ell == 3) return g.triangle_count();
  const int n = g.n();
  const int words = static_cast<int>(g.row(0).size());
  std::vector<std::uint64_t> cand(static_cast<std::size_t>(ell) * words);
  std::int64_t total = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!g.has_edge(a, b)) continue;
      const auto ra = g.row(a);
      const auto rb = g.row(b);
      for (int w = 0; w < words; ++w) cand[w] = ra[w] & rb[w];
      total += clique_extend(g, cand, 0, b, ell - 2);
    }
  }
  return total;
}

double hom_density(const SubgraphKind& kind, const AdjacencyState& g) {
  const double n = g.n();
  switch (kind.kind) {
    case SubgraphKind::Kind::Edge:
      return 2.0 * static_cast<double>(g.edge_count()) / (n * n);
    case SubgraphKind::Kind::Wedge: {
      // Maps of the 3-vertex path: any center v, each leaf independently to
      // a neighbor of v, so sum_v deg(v)^2 maps in total.
      double total = 0.0;
      for (int v = 0; v < g.n(); ++v) {
        const double d = g.degree(v);
        total += d * d;
      }
      return total / (n * n * n);
    }
    case SubgraphKind::Kind::Triangle:
      return 6.0 * static_cast<double>(g.triangle_count()) / (n * n * n);
    case SubgraphKind::Kind::Clique: {
      if (kind.ell == 3) {
        return 6.0 * static_cast<double>(g.triangle_count()) / (n * n * n);
      }
      double factorial = 1.0;
      for (int i = 2; i <= kind.ell; ++i) factorial *= i;
      return factorial * static_cast<double>(clique_count(g, kind.ell)) /
             std::pow(n, kind.ell);
    }
  }
  throw std::logic_error("unknown subgraph kind");
}

double hamiltonian_et(const ModelParams& p, const AdjacencyState& g) {
  return p.alpha / g.n() * static_cast<double>(g.triangle_count()) +
         p.h * static_cast<double>(g.edge_count());
}

double hamiltonian_mf(const ModelParams& p, const AdjacencyState& g) {
  const double n = g.n();
  const double e = static_cast<double>(g.edge_count());
  return 4.0 * p.alpha / (3.0 * n * n * n * n) * e * e * e + p.h * e;
}

void write_edge_list(std::ostream& os, const AdjacencyState& g) {
  os << g.n() << '\n';
  for (int a = 0; a < g.n(); ++a) {
    for (int b = a + 1; b < g.n(); ++b) {
      if (g.has_edge(a, b)) os << a << ' ' << b << '\n';
    }
  }
}

AdjacencyState read_edge_list(std::istream& is) {
  int n = 0;
  if (!(is >> n)) throw std::runtime_error("edge list: missing vertex count");
  AdjacencyState g(n);
  int a = 0, b = 0;
  while (is >> a >> b) {
    if (g.has_edge(a, b)) {
      throw std::runtime_error("edge list: duplicate edge");
    }
    g.flip_edge(a, b);
  }
  return g;
}

}  // namespace ergkit
