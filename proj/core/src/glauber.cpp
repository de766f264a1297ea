#include "ergkit/glauber.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ergkit/numeric.hpp"

namespace ergkit {

namespace detail {

std::pair<int, int> pair_from_index(std::int64_t k, int n) {
  const double kd = static_cast<double>(k);
  int a = static_cast<int>(
      std::floor(n - 0.5 - std::sqrt((n - 0.5) * (n - 0.5) - 2.0 * kd)));
  auto row_start = [n](int r) {
    return static_cast<std::int64_t>(r) * n -
           static_cast<std::int64_t>(r) * (r + 1) / 2;
  };
  if (a < 0) a = 0;
  if (a > n - 2) a = n - 2;
  while (a < n - 2 && row_start(a + 1) <= k) ++a;
  while (a > 0 && row_start(a) > k) --a;
  const int b = static_cast<int>(k - row_start(a)) + a + 1;
  return {a, b};
}

}  // namespace detail

namespace {

AdjacencyState make_init(int n, const InitSpec& init, Xoshiro256pp& rng) {
  switch (init.kind) {
    case InitSpec::Kind::Empty:
      return AdjacencyState::empty(n);
    case InitSpec::Kind::Complete:
      return AdjacencyState::complete(n);
    case InitSpec::Kind::Bernoulli: {
      AdjacencyState g(n);
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          if (rng.uniform01() < init.p) g.flip_edge(a, b);
        }
      }
      return g;
    }
  }
  throw std::logic_error("unknown init kind");
}

std::vector<double> build_set_prob(int n, const ModelParams& p,
                                   UpdateRule rule) {
  if (n < 3) throw std::domain_error("chain needs n >= 3");
  const double coef = rule == UpdateRule::Hamiltonian ? p.alpha / n : p.alpha;
  std::vector<double> table(static_cast<std::size_t>(n) - 1);
  for (int w = 0; w <= n - 2; ++w) {
    table[static_cast<std::size_t>(w)] = numeric::logistic(coef * w + p.h);
  }
  return table;
}

int env_thread_cap() {
  if (const char* s = std::getenv("ERGKIT_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::int64_t default_burn_in(int n) {
  return static_cast<std::int64_t>(
      std::ceil(10.0 * static_cast<double>(n) * n * std::log(n)));
}

std::int64_t default_thin(int n) { return static_cast<std::int64_t>(n) * n; }

GlauberChain::GlauberChain(int n, const ModelParams& params,
                           std::uint64_t seed, const InitSpec& init,
                           UpdateRule rule)
    : state_(3),  // replaced below once the RNG has seeded the init state
      rng_(seed),
      set_prob_(build_set_prob(n, params, rule)),
      num_pairs_(static_cast<std::int64_t>(n) * (n - 1) / 2),
      n_(n) {
  state_ = make_init(n, init, rng_);
}

bool GlauberChain::step() {
  const auto [a, b] = detail::pair_from_index(
      static_cast<std::int64_t>(
          rng_.bounded(static_cast<std::uint64_t>(num_pairs_))),
      n_);
  const int w = state_.common_neighbor_count(a, b);
  const bool present = rng_.uniform01() < set_prob_[static_cast<std::size_t>(w)];
  if (present == state_.has_edge(a, b)) return false;
  state_.flip_edge(a, b);
  return true;
}

bool glauber_step(AdjacencyState& state, const ModelParams& params,
                  Xoshiro256pp& rng, UpdateRule rule) {
  const int n = state.n();
  const std::int64_t num_pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  const auto [a, b] = detail::pair_from_index(
      static_cast<std::int64_t>(
          rng.bounded(static_cast<std::uint64_t>(num_pairs))),
      n);
  const int w = state.common_neighbor_count(a, b);
  const double coef =
      rule == UpdateRule::Hamiltonian ? params.alpha / n : params.alpha;
  const bool present = rng.uniform01() < numeric::logistic(coef * w + params.h);
  if (present == state.has_edge(a, b)) return false;
  state.flip_edge(a, b);
  return true;
}

SampleBatch run_chain(const ChainConfig& cfg, int chain_index) {
  if (cfg.n < 3) throw std::domain_error("chain needs n >= 3");
  if (cfg.num_samples < 1 || cfg.effective_thin() < 1 ||
      cfg.effective_burn_in() < 0) {
    throw std::invalid_argument("invalid chain configuration");
  }
  const auto t0 = std::chrono::steady_clock::now();

  // Chain i owns the stream obtained by jumping the master seed i times.
  Xoshiro256pp rng(cfg.seed);
  for (int i = 0; i < chain_index; ++i) rng.jump();
  AdjacencyState state = make_init(cfg.n, cfg.init, rng);
  const std::vector<double> set_prob = build_set_prob(cfg.n, cfg.params, cfg.rule);
  const std::int64_t num_pairs =
      static_cast<std::int64_t>(cfg.n) * (cfg.n - 1) / 2;

  const auto do_step = [&]() {
    const auto [a, b] = detail::pair_from_index(
        static_cast<std::int64_t>(
            rng.bounded(static_cast<std::uint64_t>(num_pairs))),
        cfg.n);
    const int w = state.common_neighbor_count(a, b);
    const bool present =
        rng.uniform01() < set_prob[static_cast<std::size_t>(w)];
    if (present != state.has_edge(a, b)) {
      state.flip_edge(a, b);
    }
  };

  SampleBatch batch;
  batch.config = cfg;
  batch.chain_index = chain_index;
  batch.rng_name = Xoshiro256pp::kName;
  batch.records.reserve(static_cast<std::size_t>(cfg.num_samples));

  const std::int64_t burn = cfg.effective_burn_in();
  const std::int64_t thin = cfg.effective_thin();
  for (std::int64_t i = 0; i < burn; ++i) do_step();
  std::int64_t step_index = burn;
  for (std::int64_t s = 0; s < cfg.num_samples; ++s) {
    for (std::int64_t i = 0; i < thin; ++i) do_step();
    step_index += thin;
    batch.records.push_back(SampleRecord{step_index, state.edge_count(),
                                         state.triangle_count()});
  }

  batch.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return batch;
}

std::vector<SampleBatch> run_chains(const ChainConfig& cfg, int num_chains,
                                    int max_threads) {
  if (num_chains < 1) throw std::invalid_argument("need at least one chain");
  int cap = env_thread_cap();
  if (max_threads >= 1) cap = std::min(cap, max_threads);
  cap = std::min(cap, num_chains);

  std::vector<SampleBatch> out(static_cast<std::size_t>(num_chains));
  std::atomic<int> next{0};
  std::vector<std::future<void>> futures;
  futures.reserve(static_cast<std::size_t>(cap));
  for (int t = 0; t < cap; ++t) {
    futures.push_back(std::async(std::launch::async, [&] {
      for (int i = next.fetch_add(1); i < num_chains; i = next.fetch_add(1)) {
        out[static_cast<std::size_t>(i)] = run_chain(cfg, i);
      }
    }));
  }
  for (auto& f : futures) f.get();
  return out;
}

double detailed_balance_residual(const AdjacencyState& state,
                                 const ModelParams& params, int a, int b) {
  AdjacencyState work = state;
  const int w = work.common_neighbor_count(a, b);
  const double p =
      numeric::logistic(params.alpha / work.n() * w + params.h);
  work.set_edge(a, b, true);
  const double h_plus = hamiltonian_et(params, work);
  work.set_edge(a, b, false);
  const double h_minus = hamiltonian_et(params, work);
  return std::abs(p / (1.0 - p) - std::exp(h_plus - h_minus));
}

void write_batch_csv(std::ostream& os, const SampleBatch& batch) {
  os << "step,edge_count,triangle_count\n";
  char buf[96];
  for (const SampleRecord& r : batch.records) {
    std::snprintf(buf, sizeof(buf), "%lld,%lld,%lld\n",
                  static_cast<long long>(r.step),
                  static_cast<long long>(r.edge_count),
                  static_cast<long long>(r.triangle_count));
    os << buf;
  }
}

}  // namespace ergkit
