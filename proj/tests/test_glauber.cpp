#include <chrono>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ergkit/glauber.hpp"
#include "ergkit/limit_lab.hpp"
#include "ergkit/numeric.hpp"

using namespace ergkit;

TEST_CASE("pair index decode is a bijection") {
  for (int n : {3, 5, 64, 150, 1000}) {
    const std::int64_t num_pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
    std::int64_t expected = 0;
    for (int a = 0; a < n && expected >= 0; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const auto [da, db] = detail::pair_from_index(expected, n);
        if (da != a || db != b) {
          CAPTURE(n);
          CAPTURE(expected);
          REQUIRE(da == a);
          REQUIRE(db == b);
        }
        ++expected;
      }
    }
    CHECK(expected == num_pairs);
  }
}

TEST_CASE("rng primitives") {
  Xoshiro256pp rng(123);
  SUBCASE("uniform01 stays in [0,1)") {
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.uniform01();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }
  SUBCASE("bounded draw is close to uniform") {
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < 300000; ++i) ++counts[rng.bounded(3)];
    for (int c : counts) {
      CHECK(std::abs(c - 100000) < 1500);
    }
  }
  SUBCASE("jump decouples the stream") {
    Xoshiro256pp a(9), b(9);
    b.jump();
    bool differ = false;
    for (int i = 0; i < 16; ++i) differ |= a.next() != b.next();
    CHECK(differ);
  }
}

TEST_CASE("default schedule") {
  CHECK(default_burn_in(4) == 222);  // ceil(10 * 16 * ln 4)
  CHECK(default_thin(4) == 16);
  CHECK(default_thin(150) == 22500);
}

TEST_CASE("chain configuration validation") {
  ChainConfig cfg;
  cfg.n = 2;
  CHECK_THROWS_AS((void)run_chain(cfg), std::domain_error);
  cfg.n = 5;
  cfg.num_samples = 0;
  CHECK_THROWS_AS((void)run_chain(cfg), std::invalid_argument);
  CHECK_THROWS_AS(GlauberChain(0, {0.0, 0.0}, 1), std::domain_error);
  CHECK_THROWS_AS(GlauberChain(2, {0.0, 0.0}, 1), std::domain_error);
}

TEST_CASE("same seed reproduces the batch bit for bit") {
  ChainConfig cfg;
  cfg.n = 12;
  cfg.params = {1.0, -0.5};
  cfg.seed = 20240501;
  cfg.burn_in_steps = 500;
  cfg.thin_steps = 7;
  cfg.num_samples = 40;

  const SampleBatch a = run_chain(cfg);
  const SampleBatch b = run_chain(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].step == b.records[i].step);
    CHECK(a.records[i].edge_count == b.records[i].edge_count);
    CHECK(a.records[i].triangle_count == b.records[i].triangle_count);
  }
  CHECK(a.rng_name == "xoshiro256++-1.0");

  SUBCASE("record layout") {
    CHECK(a.records.size() == 40);
    for (std::size_t i = 1; i < a.records.size(); ++i) {
      CHECK(a.records[i].step - a.records[i - 1].step == 7);
    }
    CHECK(a.records.front().step == 500 + 7);
  }
  SUBCASE("different seeds decorrelate") {
    ChainConfig other = cfg;
    other.seed = 999;
    const SampleBatch c = run_chain(other);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      any_diff |= a.records[i].edge_count != c.records[i].edge_count;
    }
    CHECK(any_diff);
  }
}

TEST_CASE("parallel chains merge deterministically") {
  ChainConfig cfg;
  cfg.n = 8;
  cfg.params = {0.5, 0.1};
  cfg.seed = 7;
  cfg.burn_in_steps = 100;
  cfg.thin_steps = 3;
  cfg.num_samples = 25;

  const auto one_thread = run_chains(cfg, 3, 1);
  const auto many_threads = run_chains(cfg, 3, 4);
  REQUIRE(one_thread.size() == 3);
  REQUIRE(many_threads.size() == 3);
  for (int c = 0; c < 3; ++c) {
    CHECK(one_thread[c].chain_index == c);
    for (std::size_t i = 0; i < one_thread[c].records.size(); ++i) {
      CHECK(one_thread[c].records[i].edge_count ==
            many_threads[c].records[i].edge_count);
      CHECK(one_thread[c].records[i].triangle_count ==
            many_threads[c].records[i].triangle_count);
    }
  }
  // Streams are genuinely distinct.
  bool differ = false;
  for (std::size_t i = 0; i < one_thread[0].records.size(); ++i) {
    differ |= one_thread[0].records[i].edge_count !=
              one_thread[1].records[i].edge_count;
  }
  CHECK(differ);
}

TEST_CASE("independent-edge stationary distribution") {
  // With alpha = 0 the chain is a product of heat-bath bits; the edge
  // count at stationarity is Binomial(N, logistic(h)).
  ChainConfig cfg;
  cfg.n = 10;
  cfg.params = {0.0, 1.0};
  cfg.seed = 31337;
  cfg.num_samples = 10000;
  const SampleBatch batch = run_chain(cfg);

  const double q = numeric::logistic(1.0);
  const int N = 45;
  double mean = 0.0;
  for (const auto& r : batch.records) mean += static_cast<double>(r.edge_count);
  mean /= static_cast<double>(batch.records.size());

  const double expect = N * q;
  const double se = std::sqrt(N * q * (1.0 - q) /
                              static_cast<double>(batch.records.size()));
  CHECK(std::abs(mean - expect) < 3.0 * se);
}

TEST_CASE("detailed balance against the edge-triangle measure") {
  SUBCASE("empty graph ratio is exp(h)") {
    const AdjacencyState g = AdjacencyState::empty(10);
    CHECK(detailed_balance_residual(g, {2.0, -1.0}, 0, 1) < 1e-9);
    const double p = numeric::logistic(-1.0);
    CHECK(p / (1.0 - p) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("random states and pairs") {
    Xoshiro256pp rng(555);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const AdjacencyState g = AdjacencyState::bernoulli(10, 0.5, rng.next());
      const int a = static_cast<int>(rng.bounded(10));
      int b = static_cast<int>(rng.bounded(9));
      if (b >= a) ++b;
      worst = std::max(worst, detailed_balance_residual(g, {2.0, -1.0}, a, b));
    }
    CHECK(worst < 1e-9);
  }
  SUBCASE("complete graph") {
    const AdjacencyState g = AdjacencyState::complete(12);
    CHECK(detailed_balance_residual(g, {1.5, 0.3}, 2, 9) < 1e-9);
  }
}

TEST_CASE("update rule variants") {
  ChainConfig cfg;
  cfg.n = 6;
  cfg.params = {1.5, 0.2};
  cfg.seed = 101;
  cfg.burn_in_steps = 50;
  cfg.thin_steps = 2;
  cfg.num_samples = 50;

  SUBCASE("literal exponent changes the dynamics when alpha != 0") {
    ChainConfig lit = cfg;
    lit.rule = UpdateRule::Literal;
    const SampleBatch a = run_chain(cfg);
    const SampleBatch b = run_chain(lit);
    bool differ = false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      differ |= a.records[i].edge_count != b.records[i].edge_count;
    }
    CHECK(differ);
  }
  SUBCASE("rules coincide at alpha = 0") {
    ChainConfig z = cfg;
    z.params = {0.0, 0.2};
    ChainConfig zl = z;
    zl.rule = UpdateRule::Literal;
    const SampleBatch a = run_chain(z);
    const SampleBatch b = run_chain(zl);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].edge_count == b.records[i].edge_count);
    }
  }
}

TEST_CASE("init specifications") {
  ChainConfig cfg;
  cfg.n = 7;
  cfg.params = {0.0, -4.0};
  cfg.seed = 5;
  cfg.burn_in_steps = 0;
  cfg.thin_steps = 1;
  cfg.num_samples = 1;

  cfg.init = {InitSpec::Kind::Complete, 0.0};
  const SampleBatch from_complete = run_chain(cfg);
  CHECK(from_complete.records[0].edge_count >= 20);

  cfg.init = {InitSpec::Kind::Empty, 0.0};
  const SampleBatch from_empty = run_chain(cfg);
  CHECK(from_empty.records[0].edge_count <= 1);
}

TEST_CASE("quick agreement with exact enumeration") {
  // Fast version of the full acceptance check: fewer steps, looser bound.
  ChainConfig cfg;
  cfg.n = 4;
  cfg.params = {1.0, 0.0};
  cfg.seed = 90210;
  cfg.burn_in_steps = 222;
  cfg.thin_steps = 1;
  cfg.num_samples = 100000;
  const SampleBatch batch = run_chain(cfg);

  const BruteForceGibbs exact(4, cfg.params);
  auto expected = exact.joint_edge_triangle();
  std::map<std::pair<int, int>, double> observed;
  for (const auto& r : batch.records) {
    observed[{static_cast<int>(r.edge_count),
              static_cast<int>(r.triangle_count)}] +=
        1.0 / static_cast<double>(batch.records.size());
  }
  double tv = 0.0;
  for (const auto& [key, prob] : expected) {
    auto it = observed.find(key);
    tv += std::abs((it == observed.end() ? 0.0 : it->second) - prob);
  }
  for (const auto& [key, prob] : observed) {
    if (expected.find(key) == expected.end()) tv += prob;
  }
  tv /= 2.0;
  CHECK(tv < 0.03);
}

TEST_CASE("glauber_step on an external state") {
  // With the set-probability pinned at one the chain fills in every pair
  // it touches, once.
  AdjacencyState g = AdjacencyState::empty(20);
  Xoshiro256pp rng(17);
  const ModelParams p{0.0, 50.0};
  int flips = 0;
  for (int i = 0; i < 5000; ++i) flips += glauber_step(g, p, rng);
  CHECK(flips == g.edge_count());
  CHECK(g.edge_count() > 150);
  CHECK(g.edge_count() == g.recount_edges());
  CHECK(g.triangle_count() == g.recount_triangles());
}

TEST_CASE("batch csv format") {
  SampleBatch batch;
  batch.config.n = 5;
  batch.records = {{10, 3, 1}, {20, 4, 2}};
  std::stringstream ss;
  write_batch_csv(ss, batch);
  CHECK(ss.str() == "step,edge_count,triangle_count\n10,3,1\n20,4,2\n");
}

TEST_CASE("step throughput stays far above the floor") {
  GlauberChain chain(150, {1.0, 1.0}, 424242);
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::int64_t kSteps = 2000000;
  std::int64_t flips = 0;
  for (std::int64_t i = 0; i < kSteps; ++i) flips += chain.step();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  CHECK(flips > 0);
  // Floor is 1e6 steps/s; the bitset kernel runs orders of magnitude higher.
  CHECK(static_cast<double>(kSteps) / secs > 1e6);
  CHECK(chain.state().triangle_count() == chain.state().recount_triangles());
}
