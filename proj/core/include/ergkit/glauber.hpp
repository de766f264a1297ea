#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ergkit/graph_core.hpp"
#include "ergkit/model.hpp"
#include "ergkit/rng.hpp"

namespace ergkit {

/// Start state for a chain.
struct InitSpec {
  enum class Kind { Empty, Complete, Bernoulli };
  Kind kind = Kind::Bernoulli;
  double p = 0.5;
};

/// Which exponent drives the heat-bath update probability.
/// Hamiltonian: (alpha/n) w + h, the rate in detailed balance with the
/// edge-triangle Hamiltonian (alpha/n) T + h E; this is the default.
/// Literal: alpha w + h, the same rule without the 1/n factor.
enum class UpdateRule { Hamiltonian, Literal };

std::int64_t default_burn_in(int n);  // ceil(10 n^2 ln n)
std::int64_t default_thin(int n);     // n^2

namespace detail {
/// Unordered pair {a, b}, a < b, from its row-major linear index in
/// [0, n(n-1)/2). sqrt-based with an exact correction step.
std::pair<int, int> pair_from_index(std::int64_t k, int n);
}  // namespace detail

struct ChainConfig {
  int n = 0;
  ModelParams params;
  std::uint64_t seed = 0;
  std::int64_t burn_in_steps = -1;  // -1: default_burn_in(n)
  std::int64_t thin_steps = -1;     // -1: default_thin(n)
  std::int64_t num_samples = 1;
  InitSpec init;
  UpdateRule rule = UpdateRule::Hamiltonian;

  std::int64_t effective_burn_in() const {
    return burn_in_steps >= 0 ? burn_in_steps : default_burn_in(n);
  }
  std::int64_t effective_thin() const {
    return thin_steps >= 0 ? thin_steps : default_thin(n);
  }
};

struct SampleRecord {
  std::int64_t step = 0;
  std::int64_t edge_count = 0;
  std::int64_t triangle_count = 0;
};

struct SampleBatch {
  ChainConfig config;
  int chain_index = 0;
  std::string rng_name;
  std::vector<SampleRecord> records;
  double wall_time_seconds = 0.0;
};

/// Single-site heat-bath chain over unordered vertex pairs. The per-step
/// set probability depends only on the common-neighbor count w, so it is
/// looked up from a table precomputed at construction.
class GlauberChain {
 public:
  GlauberChain(int n, const ModelParams& params, std::uint64_t seed,
               const InitSpec& init = {},
               UpdateRule rule = UpdateRule::Hamiltonian);

  /// One heat-bath update; returns whether the edge value changed.
  bool step();

  const AdjacencyState& state() const { return state_; }
  Xoshiro256pp& rng() { return rng_; }

 private:
  AdjacencyState state_;
  Xoshiro256pp rng_;
  std::vector<double> set_prob_;  // indexed by common-neighbor count
  std::int64_t num_pairs_;
  int n_;
};

/// One heat-bath update on an external state (table-free variant).
bool glauber_step(AdjacencyState& state, const ModelParams& params,
                  Xoshiro256pp& rng, UpdateRule rule = UpdateRule::Hamiltonian);

/// Runs burn-in then records every thin_steps; deterministic given the
/// seed. chain_index selects the RNG stream (chain i jumps i times).
SampleBatch run_chain(const ChainConfig& cfg, int chain_index = 0);

/// num_chains independent streams run in parallel (capped by max_threads
/// and the ERGKIT_THREADS environment variable), merged in chain order.
std::vector<SampleBatch> run_chains(const ChainConfig& cfg, int num_chains,
                                    int max_threads = 0);

/// |p/(1-p) - exp(H(x+) - H(x-))| for the pair {a,b}, where p is the
/// Hamiltonian-rule set probability and H the edge-triangle Hamiltonian.
double detailed_balance_residual(const AdjacencyState& state,
                                 const ModelParams& params, int a, int b);

/// CSV "step,edge_count,triangle_count".
void write_batch_csv(std::ostream& os, const SampleBatch& batch);

}  // namespace ergkit
