#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ergkit/graph_core.hpp"
#include "ergkit/rng.hpp"
#include "oracles.hpp"

using namespace ergkit;

TEST_CASE("construction") {
  const AdjacencyState k4 = AdjacencyState::complete(4);
  CHECK(k4.edge_count() == 6);
  CHECK(k4.triangle_count() == 4);

  const AdjacencyState e5 = AdjacencyState::empty(5);
  CHECK(e5.edge_count() == 0);
  CHECK(e5.triangle_count() == 0);

  const AdjacencyState r = AdjacencyState::bernoulli(6, 0.5, 12345);
  CHECK(r.edge_count() == r.recount_edges());
  CHECK(r.triangle_count() == r.recount_triangles());

  CHECK_THROWS_AS(AdjacencyState(2), std::domain_error);
}

TEST_CASE("flip_edge deltas") {
  SUBCASE("closing the last edge of K4 adds two triangles") {
    AdjacencyState g = AdjacencyState::complete(4);
    g.flip_edge(0, 1);
    CHECK(g.triangle_count() == 2);
    const auto delta = g.flip_edge(0, 1);
    CHECK(delta.edge_delta == 1);
    CHECK(delta.triangle_delta == 2);
    CHECK(g.triangle_count() == 4);
  }
  SUBCASE("flip twice restores the state bit for bit") {
    AdjacencyState g = AdjacencyState::bernoulli(12, 0.4, 777);
    const AdjacencyState before = g;
    g.flip_edge(3, 9);
    g.flip_edge(3, 9);
    CHECK(g == before);
  }
  SUBCASE("first edge closes no triangle") {
    AdjacencyState g(5);
    const auto delta = g.flip_edge(1, 2);
    CHECK(delta.triangle_delta == 0);
    CHECK(delta.edge_delta == 1);
  }
  SUBCASE("self loops rejected") {
    AdjacencyState g(5);
    CHECK_THROWS_AS(g.flip_edge(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(g.flip_edge(0, 7), std::invalid_argument);
  }
}

TEST_CASE("common neighbors") {
  const AdjacencyState kn = AdjacencyState::complete(9);
  CHECK(kn.common_neighbor_count(0, 5) == 7);

  const AdjacencyState e = AdjacencyState::empty(9);
  CHECK(e.common_neighbor_count(0, 5) == 0);

  const AdjacencyState r = AdjacencyState::bernoulli(6, 0.5, 31);
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      CHECK(r.common_neighbor_count(a, b) ==
            oracles::common_neighbors_naive(r, a, b));
    }
  }
  CHECK_THROWS_AS((void)r.common_neighbor_count(3, 3), std::invalid_argument);
}

TEST_CASE("word-boundary sizes keep counts exact") {
  for (int n : {63, 64, 65, 130}) {
    AdjacencyState g = AdjacencyState::bernoulli(n, 0.3, 91 + n);
    CHECK(g.edge_count() == g.recount_edges());
    CHECK(g.triangle_count() == g.recount_triangles());
    CHECK(g.common_neighbor_count(0, n - 1) ==
          oracles::common_neighbors_naive(g, 0, n - 1));
  }
}

TEST_CASE("homomorphism densities") {
  SUBCASE("triangle on complete graphs") {
    for (int n : {3, 5, 7}) {
      const AdjacencyState kn = AdjacencyState::complete(n);
      CHECK(hom_density(SubgraphKind::triangle(), kn) ==
            doctest::Approx(double(n) * (n - 1) * (n - 2) / std::pow(n, 3)));
    }
  }
  SUBCASE("edge density on the empty graph") {
    CHECK(hom_density(SubgraphKind::edge(), AdjacencyState::empty(6)) == 0.0);
  }
  SUBCASE("wedge maps into a single triangle") {
    const AdjacencyState k3 = AdjacencyState::complete(3);
    CHECK(hom_density(SubgraphKind::wedge(), k3) ==
          doctest::Approx(12.0 / 27.0));
    // Authoritative recount: enumerate every vertex map of the 2-edge path.
    CHECK(oracles::hom_count_all_maps({{0, 1}, {1, 2}}, 3, k3) == 12);
  }
  SUBCASE("wedge closed form equals all-maps enumeration") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      for (int n : {4, 5}) {
        const AdjacencyState g = AdjacencyState::bernoulli(n, 0.55, seed);
        const double brute =
            double(oracles::hom_count_all_maps({{0, 1}, {1, 2}}, 3, g)) /
            std::pow(n, 3);
        CHECK(hom_density(SubgraphKind::wedge(), g) ==
              doctest::Approx(brute).epsilon(1e-13));
      }
    }
  }
  SUBCASE("edge and triangle densities equal all-maps enumeration") {
    const AdjacencyState g = AdjacencyState::bernoulli(5, 0.6, 42);
    CHECK(hom_density(SubgraphKind::edge(), g) ==
          doctest::Approx(double(oracles::hom_count_all_maps({{0, 1}}, 2, g)) /
                          25.0));
    CHECK(hom_density(SubgraphKind::triangle(), g) ==
          doctest::Approx(
              double(oracles::hom_count_all_maps({{0, 1}, {1, 2}, {0, 2}}, 3,
                                                 g)) /
              125.0));
  }
  SUBCASE("clique densities match all-maps enumeration") {
    const std::vector<std::pair<int, int>> k4_edges{{0, 1}, {0, 2}, {0, 3},
                                                    {1, 2}, {1, 3}, {2, 3}};
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const AdjacencyState g = AdjacencyState::bernoulli(5, 0.7, seed);
      const double brute =
          double(oracles::hom_count_all_maps(k4_edges, 4, g)) / std::pow(5, 4);
      CHECK(hom_density(SubgraphKind::clique(4), g) ==
            doctest::Approx(brute).epsilon(1e-13));
    }
    const AdjacencyState k5 = AdjacencyState::complete(5);
    CHECK(clique_count(k5, 5) == 1);
    CHECK(hom_density(SubgraphKind::clique(5), k5) ==
          doctest::Approx(120.0 / 3125.0));
    CHECK(clique_count(k5, 4) == 5);
  }
  SUBCASE("clique(3) coincides with triangle") {
    const AdjacencyState g = AdjacencyState::bernoulli(8, 0.5, 5);
    CHECK(hom_density(SubgraphKind::clique(3), g) ==
          hom_density(SubgraphKind::triangle(), g));
  }
  SUBCASE("edge density recovers the edge count") {
    const AdjacencyState g = AdjacencyState::bernoulli(10, 0.35, 64);
    CHECK(hom_density(SubgraphKind::edge(), g) * 100.0 / 2.0 ==
          doctest::Approx(double(g.edge_count())).epsilon(1e-12));
  }
}

TEST_CASE("hamiltonians") {
  const AdjacencyState empty = AdjacencyState::empty(7);
  CHECK(hamiltonian_et({1.3, -0.4}, empty) == 0.0);
  CHECK(hamiltonian_mf({1.3, -0.4}, empty) == 0.0);

  const AdjacencyState k4 = AdjacencyState::complete(4);
  CHECK(hamiltonian_et({1.0, 1.0}, k4) == doctest::Approx(7.0));

  SUBCASE("alpha = 0 collapses both to h times the edge count") {
    const AdjacencyState g = AdjacencyState::bernoulli(9, 0.5, 8);
    CHECK(hamiltonian_et({0.0, 0.7}, g) ==
          doctest::Approx(0.7 * double(g.edge_count())));
    CHECK(hamiltonian_mf({0.0, 0.7}, g) ==
          doctest::Approx(hamiltonian_et({0.0, 0.7}, g)));
  }
  SUBCASE("mean-field value equals its scalar form") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
      const AdjacencyState g = AdjacencyState::bernoulli(12, 0.45, seed);
      const double n = 12.0;
      const double m = 2.0 * double(g.edge_count()) / (n * n);
      const double scalar = n * n * (1.7 / 6.0 * m * m * m + -0.3 / 2.0 * m);
      CHECK(hamiltonian_mf({1.7, -0.3}, g) ==
            doctest::Approx(scalar).epsilon(1e-9));
    }
  }
}

TEST_CASE("edge list round trip") {
  const AdjacencyState g = AdjacencyState::bernoulli(11, 0.4, 314);
  std::stringstream ss;
  write_edge_list(ss, g);
  const AdjacencyState back = read_edge_list(ss);
  CHECK(back == g);

  std::stringstream bad("4\n0 1\n0 1\n");
  CHECK_THROWS(read_edge_list(bad));
}

TEST_CASE("incremental bookkeeping survives many flips") {
  AdjacencyState g = AdjacencyState::bernoulli(32, 0.5, 999);
  Xoshiro256pp rng(1000);
  for (int i = 0; i < 20000; ++i) {
    const int a = static_cast<int>(rng.bounded(32));
    int b = static_cast<int>(rng.bounded(31));
    if (b >= a) ++b;
    g.flip_edge(a, b);
    if (i % 4000 == 0) {
      CHECK(g.edge_count() == g.recount_edges());
      CHECK(g.triangle_count() == g.recount_triangles());
    }
  }
  CHECK(g.edge_count() == g.recount_edges());
  CHECK(g.triangle_count() == g.recount_triangles());
}
