#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ergkit/glauber.hpp"
#include "ergkit/graph_core.hpp"
#include "ergkit/meanfield_exact.hpp"
#include "ergkit/model.hpp"

namespace ergkit {

/// Exact Gibbs law over all 2^{n(n-1)/2} graphs, n <= 6. Per-graph log
/// probabilities are kept in log space; every derived quantity reduces
/// over the full enumeration.
class BruteForceGibbs {
 public:
  BruteForceGibbs(int n, const ModelParams& params);

  int n() const { return n_; }
  const ModelParams& params() const { return params_; }

  double prob(std::uint32_t mask) const;
  double log_partition() const { return log_partition_; }

  /// Exact joint law of (edge count, triangle count).
  std::map<std::pair<int, int>, double> joint_edge_triangle() const;

  /// Distribution of a statistic, aggregated and sorted by value.
  std::vector<std::pair<double, double>> distribution(
      const SubgraphKind& kind) const;

  /// E[(edge count)^k].
  double edge_count_moment(int k) const;

  /// E[t(H, G)^power] for the supported subgraph family.
  double hom_moment(const SubgraphKind& kind, int power) const;

 private:
  int n_;
  ModelParams params_;
  std::vector<double> log_prob_;  // per edge-set bitmask
  std::vector<std::uint8_t> edge_of_mask_;
  std::vector<std::uint8_t> tri_of_mask_;
  double log_partition_ = 0.0;
};

enum class Scaling { Clt, NonStdClt, Raw };

/// Affinely rescaled series of the triangle statistic, optionally weighted
/// (probability-weighted when built from an exact pmf, uniform from
/// samples). Clt: sqrt(6) (T/n - n^2 c/6)/n. NonStdClt: 6 (T/n - n^2
/// c/6)/n^{3/2}. Raw: 6T/n^3. The center c defaults to the empirical mean
/// of 6T/n^3.
struct StandardizedSeries {
  std::vector<double> values;
  std::vector<double> weights;
  Scaling scaling = Scaling::Raw;
  double center = 0.0;
  int n = 0;

  double weight_total() const;
  double moment(int k) const;  // weighted raw moment
};

StandardizedSeries standardize(const SampleBatch& batch, Scaling scaling,
                               std::optional<double> center = std::nullopt);

/// Same scalings applied to the exact mean-field pmf, where the triangle
/// statistic satisfies 6T/n^3 = m^3.
StandardizedSeries standardize_pmf(const EdgeDensityPmf& pmf, Scaling scaling,
                                   std::optional<double> center = std::nullopt);

/// Kolmogorov-Smirnov distance between the weighted empirical CDF and the
/// law's CDF (quartic CDF by quadrature accumulated along the sorted
/// support). Mixture laws are rejected.
double ks_distance(const StandardizedSeries& series, const LimitLaw& law);

struct ConcentrationResult {
  double fraction_inside = 0.0;
  double fraction_atom_low = 0.0;
  double fraction_atom_high = 0.0;
};

/// Fraction of samples with 6T/n^3 inside the union of eps-intervals
/// around the cubed maximizers, with per-atom assignment counts. The two
/// intervals must be disjoint.
ConcentrationResult concentration_check(const SampleBatch& batch,
                                        const MaximizerSet& maximizers,
                                        double eps);

struct MomentRow {
  int order = 0;
  double empirical = 0.0;
  double theoretical = 0.0;
  double gap = 0.0;  // relative to theory when it is nonzero, absolute otherwise
};

struct MomentReport {
  std::vector<MomentRow> rows;  // orders 1, 2, 4
  double kurtosis_empirical = 0.0;
  double kurtosis_theoretical = 0.0;
};

/// Empirical vs law moments of orders 1, 2, 4; law moments by quadrature
/// (1e-10) for the quartic case.
MomentReport moment_report(const StandardizedSeries& series,
                           const LimitLaw& law);

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  double count = 0.0;
  double theory_density = 0.0;
};

/// Equal-width histogram with the law's density at bin midpoints.
std::vector<HistogramBin> make_histogram(const StandardizedSeries& series,
                                         const LimitLaw& law, int bins);

/// CSV "bin_left,bin_right,count,theory_density".
void write_histogram_csv(std::ostream& os,
                         const std::vector<HistogramBin>& bins);

}  // namespace ergkit
