#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "ergkit/model.hpp"
#include "ergkit/scalar_landscape.hpp"

namespace ergkit {

class EmptyWindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact finite-n pmf of the mean-field edge density. The state space is
/// the edge count k in {0, ..., N}, N = n(n-1)/2, with density m = k/N and
/// log weight logChoose(N, k) + 2N (alpha/6 m^3 + h/2 m). The energy scale
/// 2N (rather than a literal n^2) is what pairs exactly with the binomial
/// entropy; it is the convention under which the finite-n sums converge to
/// the replica-symmetric limits without an O(n) tilt.
struct EdgeDensityPmf {
  int n = 0;
  ModelParams params;
  std::int64_t k_begin = 0;  // first edge count in the stored support
  std::vector<double> log_weights;
  // Partition sum as shift + log_norm; kept apart so probabilities can be
  // formed as exp((lw - shift) - norm) without the ~ulp(shift) error that
  // a combined constant would inject (shift grows like N log N).
  double log_shift = 0.0;
  double log_norm = 0.0;

  double log_partition() const { return log_shift + log_norm; }
  std::int64_t num_pairs() const {
    return static_cast<std::int64_t>(n) * (n - 1) / 2;
  }
  std::int64_t support_size() const {
    return static_cast<std::int64_t>(log_weights.size());
  }
  /// Effective squared size: the prefactor of the energy in the exponent.
  double effective_n_sq() const { return 2.0 * static_cast<double>(num_pairs()); }
  double density(std::int64_t k) const {
    return static_cast<double>(k) / static_cast<double>(num_pairs());
  }
  double prob_at_index(std::int64_t i) const;
  /// Finite-size free energy, log_partition / (2N).
  double free_energy_density() const {
    const double scale = effective_n_sq();
    return log_shift / scale + log_norm / scale;
  }
};

/// Builds the full pmf (support size N+1) in log space; the partition sum
/// uses a running max with a deterministic pairwise reduction. Throws
/// std::domain_error for n < 3.
EdgeDensityPmf build_pmf(int n, const ModelParams& p);

/// E[f(m)] under the pmf, with a deterministic compensated reduction.
double pmf_expect(const EdgeDensityPmf& pmf,
                  const std::function<double(double)>& f);

/// E[m^k]. k = 3 is the mean of the triangle-density statistic, k =
/// binom(ell,2) the clique version.
double moment(const EdgeDensityPmf& pmf, int k);

/// The alpha-susceptibility d^2 f/d alpha^2 of the finite-size free
/// energy, computed directly as (2N) Var(m^3) / 36.
double triangle_variance(const EdgeDensityPmf& pmf);

/// Conditioning window around one maximizer: |m - u_i| <= n^{-delta}.
struct WindowSpec {
  int center_index = 1;  // 1 or 2, selecting the maximizer
  double delta = 0.3;
};

/// Restriction of the pmf to the window, renormalized. Throws
/// EmptyWindowError when no lattice point falls inside and
/// std::domain_error for delta outside the phase's valid range
/// ((0,1) off criticality, (0,3/8) at the critical point).
EdgeDensityPmf conditional_pmf(const EdgeDensityPmf& pmf,
                               const WindowSpec& window,
                               const MaximizerSet& maximizers);

/// Laplace window sums. Off criticality one value per maximizer,
///   D_i = sum over |m-u_i| <= nt^{-delta} of (2/nt)
///         exp(-c_i x^2 + k_i x^3 / nt) / sqrt(m(1-m)),  x = nt (m - u_i),
/// with nt = sqrt(2N); the limit is 2 sqrt(pi / (1 - 2 alpha u^2 (1-u))).
/// At the critical point the single value uses y = sqrt(nt) (m - 2/3),
/// volume 2/nt^{3/2}, and exponent -(81/64) y^4 + k_c y^5 / sqrt(nt); the
/// limit is about 3.63.
std::vector<double> riemann_D(int n, const ModelParams& p,
                              const MaximizerSet& maximizers, double delta);

struct MixtureMass {
  double mass_low = 0.0;   // normalized over the two windows
  double mass_high = 0.0;
  double remainder = 0.0;  // probability outside both windows
};

/// Window masses around the two maximizers (delta = 0.3), estimating
/// (kappa, 1-kappa). Throws std::invalid_argument unless exactly two
/// maximizers are given and the windows are disjoint.
MixtureMass mixture_mass(const EdgeDensityPmf& pmf,
                         const MaximizerSet& maximizers);

struct SpeedRow {
  int n = 0;
  double scaled_mean_gap = 0.0;  // scale * |E[m^3] - u*^3|
  double scaled_abs_gap = 0.0;   // scale * E|m^3 - u*^3|
  double limit_abs = 0.0;        // E|limit law| for comparison
};

/// Convergence-speed table over the given sizes; scale is n in the
/// uniqueness region and sqrt(n) at the critical point. Curve points are
/// rejected (the unconditional limit does not exist there).
std::vector<SpeedRow> convergence_speed_table(const ModelParams& p,
                                              std::span<const int> n_list);

/// CSV export "k,m,log_weight,prob" with 17 significant digits.
void write_pmf_csv(std::ostream& os, const EdgeDensityPmf& pmf);

}  // namespace ergkit
