#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ergkit/model.hpp"

namespace ergkit {

/// Simple graph on n labeled vertices stored as n bit rows (symmetric,
/// zero diagonal) with cached edge and triangle counts maintained
/// incrementally. Common-neighbor queries cost O(n/64) words.
class AdjacencyState {
 public:
  /// Empty graph. Throws std::domain_error for n < 3.
  explicit AdjacencyState(int n);

  static AdjacencyState empty(int n) { return AdjacencyState(n); }
  static AdjacencyState complete(int n);
  static AdjacencyState bernoulli(int n, double p, std::uint64_t seed);

  int n() const { return n_; }
  std::int64_t edge_count() const { return edges_; }
  std::int64_t triangle_count() const { return triangles_; }

  bool has_edge(int a, int b) const;

  struct FlipDelta {
    int edge_delta;
    std::int64_t triangle_delta;
  };

  /// Toggles edge {a,b}; the triangle delta is +-(common neighbor count).
  /// Throws std::invalid_argument for a == b.
  FlipDelta flip_edge(int a, int b);

  /// Sets edge {a,b} to the given value (no-op when already there).
  void set_edge(int a, int b, bool present);

  /// Number of vertices adjacent to both a and b.
  int common_neighbor_count(int a, int b) const;

  int degree(int v) const;

  /// Full recounts from the bit rows, used to audit the cached values.
  std::int64_t recount_edges() const;
  std::int64_t recount_triangles() const;

  std::span<const std::uint64_t> row(int v) const {
    return {bits_.data() + static_cast<std::size_t>(v) * words_,
            static_cast<std::size_t>(words_)};
  }

  bool operator==(const AdjacencyState& other) const;

 private:
  void check_pair(int a, int b) const;

  int n_;
  int words_;
  std::vector<std::uint64_t> bits_;
  std::int64_t edges_ = 0;
  std::int64_t triangles_ = 0;
};

/// Subgraph family supported by hom_density.
struct SubgraphKind {
  enum class Kind { Edge, Wedge, Triangle, Clique };

  Kind kind = Kind::Edge;
  int ell = 3;  // clique size, meaningful for Kind::Clique only

  static SubgraphKind edge() { return {Kind::Edge, 2}; }
  static SubgraphKind wedge() { return {Kind::Wedge, 3}; }
  static SubgraphKind triangle() { return {Kind::Triangle, 3}; }
  static SubgraphKind clique(int ell) { return {Kind::Clique, ell}; }
};

/// Number of ell-vertex cliques, by candidate-set enumeration (ell in [3,5]).
std::int64_t clique_count(const AdjacencyState& g, int ell);

/// Homomorphism density t(H, G): adjacency-preserving (not necessarily
/// injective) maps divided by n^{|V(H)|}. Edge: 2E/n^2. Wedge: sum of
/// squared degrees / n^3. Triangle: 6T/n^3. Clique(ell): all ell! vertex
/// orders of each clique are homomorphisms, giving ell! C_ell / n^ell.
double hom_density(const SubgraphKind& kind, const AdjacencyState& g);

/// Edge-triangle Hamiltonian (alpha/n) T + h E.
double hamiltonian_et(const ModelParams& p, const AdjacencyState& g);

/// Mean-field Hamiltonian (4 alpha / 3 n^4) E^3 + h E.
double hamiltonian_mf(const ModelParams& p, const AdjacencyState& g);

/// Edge-list text format: first line n, then one "u v" line per edge,
/// 0-indexed.
void write_edge_list(std::ostream& os, const AdjacencyState& g);
AdjacencyState read_edge_list(std::istream& is);

}  // namespace ergkit
