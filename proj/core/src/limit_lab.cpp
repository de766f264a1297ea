#include "ergkit/limit_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ergkit/numeric.hpp"

namespace ergkit {

namespace {

std::vector<std::pair<int, int>> pair_list(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  return pairs;
}

}  // namespace

BruteForceGibbs::BruteForceGibbs(int n, const ModelParams& params)
    : n_(n), params_(params) {
  if (n < 3) throw std::domain_error("enumeration needs n >= 3");
  if (n > 6) throw std::domain_error("enumeration is limited to n <= 6");
  const auto pairs = pair_list(n);
  const int num_edges = static_cast<int>(pairs.size());
  const std::uint32_t num_masks = 1u << num_edges;

  // Triangles as 3-bit masks over the edge indices.
  std::vector<std::uint32_t> triangle_masks;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        std::uint32_t mask = 0;
        for (int e = 0; e < num_edges; ++e) {
          const auto& [u, v] = pairs[static_cast<std::size_t>(e)];
          const bool in_triple = (u == a || u == b || u == c) &&
                                 (v == a || v == b || v == c);
          if (in_triple) mask |= 1u << e;
        }
        triangle_masks.push_back(mask);
      }
    }
  }

  log_prob_.resize(num_masks);
  edge_of_mask_.resize(num_masks);
  tri_of_mask_.resize(num_masks);
  for (std::uint32_t mask = 0; mask < num_masks; ++mask) {
    const int e = std::popcount(mask);
    int t = 0;
    for (std::uint32_t tm : triangle_masks) {
      if ((mask & tm) == tm) ++t;
    }
    edge_of_mask_[mask] = static_cast<std::uint8_t>(e);
    tri_of_mask_[mask] = static_cast<std::uint8_t>(t);
    log_prob_[mask] = params.alpha / n * t + params.h * e;
  }
  log_partition_ = numeric::log_sum_exp(log_prob_);
  for (double& lp : log_prob_) lp -= log_partition_;
}

double BruteForceGibbs::prob(std::uint32_t mask) const {
  return std::exp(log_prob_[mask]);
}

std::map<std::pair<int, int>, double> BruteForceGibbs::joint_edge_triangle()
    const {
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t mask = 0; mask < log_prob_.size(); ++mask) {
    joint[{edge_of_mask_[mask], tri_of_mask_[mask]}] += std::exp(log_prob_[mask]);
  }
  return joint;
}

std::vector<std::pair<double, double>> BruteForceGibbs::distribution(
    const SubgraphKind& kind) const {
  std::map<double, double> dist;
  const auto pairs = pair_list(n_);
  for (std::size_t mask = 0; mask < log_prob_.size(); ++mask) {
    AdjacencyState g(n_);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (mask >> e & 1u) g.flip_edge(pairs[e].first, pairs[e].second);
    }
    dist[hom_density(kind, g)] += std::exp(log_prob_[mask]);
  }
  return {dist.begin(), dist.end()};
}

double BruteForceGibbs::edge_count_moment(int k) const {
  double total = 0.0;
  for (std::size_t mask = 0; mask < log_prob_.size(); ++mask) {
    total += std::exp(log_prob_[mask]) *
             std::pow(static_cast<double>(edge_of_mask_[mask]), k);
  }
  return total;
}

double BruteForceGibbs::hom_moment(const SubgraphKind& kind, int power) const {
  double total = 0.0;
  for (const auto& [value, p] : distribution(kind)) {
    total += p * std::pow(value, power);
  }
  return total;
}

double StandardizedSeries::weight_total() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double StandardizedSeries::moment(int k) const {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += weights[i] * std::pow(values[i], k);
  }
  return total / weight_total();
}

namespace {

double apply_scaling(Scaling scaling, double t, double center, double n) {
  switch (scaling) {
    case Scaling::Clt:
      // sqrt(6) (T/n - n^2 c / 6) / n with t = 6T/n^3.
      return n * (t - center) / std::sqrt(6.0);
    case Scaling::NonStdClt:
      return std::sqrt(n) * (t - center);
    case Scaling::Raw:
      return t;
  }
  throw std::logic_error("unknown scaling");
}

}  // namespace

StandardizedSeries standardize(const SampleBatch& batch, Scaling scaling,
                               std::optional<double> center) {
  if (batch.records.empty()) throw std::invalid_argument("empty batch");
  const double n = batch.config.n;
  const double n3 = n * n * n;
  std::vector<double> t;
  t.reserve(batch.records.size());
  for (const SampleRecord& r : batch.records) {
    t.push_back(6.0 * static_cast<double>(r.triangle_count) / n3);
  }
  double c = 0.0;
  if (center) {
    c = *center;
  } else {
    c = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
  }
  StandardizedSeries out;
  out.scaling = scaling;
  out.center = c;
  out.n = batch.config.n;
  out.values.reserve(t.size());
  for (double ti : t) out.values.push_back(apply_scaling(scaling, ti, c, n));
  out.weights.assign(t.size(), 1.0);
  return out;
}

StandardizedSeries standardize_pmf(const EdgeDensityPmf& pmf, Scaling scaling,
                                   std::optional<double> center) {
  const double c = center ? *center : moment(pmf, 3);
  StandardizedSeries out;
  out.scaling = scaling;
  out.center = c;
  out.n = pmf.n;
  const double n = pmf.n;
  out.values.reserve(static_cast<std::size_t>(pmf.support_size()));
  out.weights.reserve(static_cast<std::size_t>(pmf.support_size()));
  for (std::int64_t i = 0; i < pmf.support_size(); ++i) {
    const double m = pmf.density(pmf.k_begin + i);
    out.values.push_back(apply_scaling(scaling, m * m * m, c, n));
    out.weights.push_back(pmf.prob_at_index(i));
  }
  return out;
}

namespace {

struct SortedSeries {
  std::vector<double> values;
  std::vector<double> cum;  // normalized cumulative weights
};

SortedSeries sort_series(const StandardizedSeries& series) {
  std::vector<std::size_t> order(series.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return series.values[a] < series.values[b];
  });
  SortedSeries out;
  out.values.reserve(order.size());
  out.cum.reserve(order.size());
  const double total = series.weight_total();
  double acc = 0.0;
  for (std::size_t idx : order) {
    acc += series.weights[idx];
    out.values.push_back(series.values[idx]);
    out.cum.push_back(acc / total);
  }
  return out;
}

}  // namespace

double ks_distance(const StandardizedSeries& series, const LimitLaw& law) {
  if (series.values.empty()) throw std::invalid_argument("empty series");
  if (std::holds_alternative<MixtureLaw>(law)) {
    throw std::invalid_argument(
        "KS against a mixture law is not supported; use concentration_check");
  }
  const SortedSeries sorted = sort_series(series);

  std::vector<double> law_cdf(sorted.values.size());
  if (const auto* gauss = std::get_if<GaussianLaw>(&law)) {
    for (std::size_t i = 0; i < sorted.values.size(); ++i) {
      law_cdf[i] = numeric::gaussian_cdf(sorted.values[i], gauss->variance);
    }
  } else {
    const double scale = std::get<QuarticLaw>(law).scale;
    const double z = numeric::quartic_normalizer(scale);
    const auto dens = [scale, z](double y) {
      const double r = y / scale;
      const double r2 = r * r;
      return std::exp(-r2 * r2) / z;
    };
    // Accumulate along the sorted support; segments between consecutive
    // points are tiny, so fixed Simpson per segment is exact to rounding.
    const double cutoff = 6.2 * scale;
    double acc = sorted.values.front() <= -cutoff
                     ? 0.0
                     : numeric::integrate(dens, -cutoff,
                                          std::min(sorted.values.front(), cutoff),
                                          1e-12);
    law_cdf[0] = acc;
    for (std::size_t i = 1; i < sorted.values.size(); ++i) {
      const double a = std::clamp(sorted.values[i - 1], -cutoff, cutoff);
      const double b = std::clamp(sorted.values[i], -cutoff, cutoff);
      if (b > a) {
        const double mid = 0.5 * (a + b);
        if (b - a < 1e-3) {
          acc += (b - a) / 6.0 * (dens(a) + 4.0 * dens(mid) + dens(b));
        } else {
          acc += numeric::integrate(dens, a, b, 1e-12);
        }
      }
      law_cdf[i] = std::min(acc, 1.0);
    }
  }

  double d = 0.0;
  double prev_cum = 0.0;
  for (std::size_t i = 0; i < sorted.values.size(); ++i) {
    d = std::max(d, std::abs(law_cdf[i] - sorted.cum[i]));
    d = std::max(d, std::abs(law_cdf[i] - prev_cum));
    prev_cum = sorted.cum[i];
  }
  return d;
}

ConcentrationResult concentration_check(const SampleBatch& batch,
                                        const MaximizerSet& maximizers,
                                        double eps) {
  if (batch.records.empty()) throw std::invalid_argument("empty batch");
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  const double n = batch.config.n;
  const double n3 = n * n * n;
  std::vector<double> atoms;
  for (double u : maximizers.maximizers) atoms.push_back(u * u * u);
  if (atoms.size() == 2 && atoms[0] + eps >= atoms[1] - eps) {
    throw std::invalid_argument("concentration intervals overlap");
  }
  ConcentrationResult out;
  std::int64_t inside = 0, low = 0, high = 0;
  for (const SampleRecord& r : batch.records) {
    const double t = 6.0 * static_cast<double>(r.triangle_count) / n3;
    if (std::abs(t - atoms.front()) < eps) {
      ++inside;
      ++low;
    } else if (atoms.size() == 2 && std::abs(t - atoms.back()) < eps) {
      ++inside;
      ++high;
    }
  }
  const double total = static_cast<double>(batch.records.size());
  out.fraction_inside = inside / total;
  out.fraction_atom_low = low / total;
  out.fraction_atom_high = high / total;
  return out;
}

MomentReport moment_report(const StandardizedSeries& series,
                           const LimitLaw& law) {
  if (series.values.empty()) throw std::invalid_argument("empty series");
  MomentReport report;
  std::array<double, 3> theory{};
  double kurt_law = 0.0;
  if (const auto* gauss = std::get_if<GaussianLaw>(&law)) {
    theory = {0.0, gauss->variance, 3.0 * gauss->variance * gauss->variance};
    kurt_law = 3.0;
  } else if (const auto* quartic = std::get_if<QuarticLaw>(&law)) {
    const double m2 = numeric::quartic_abs_moment(quartic->scale, 2);
    const double m4 = numeric::quartic_abs_moment(quartic->scale, 4);
    theory = {0.0, m2, m4};
    kurt_law = m4 / (m2 * m2);
  } else {
    const auto& mix = std::get<MixtureLaw>(law);
    const auto mom = [&mix](int k) {
      return mix.kappa * std::pow(mix.atom_low, k) +
             (1.0 - mix.kappa) * std::pow(mix.atom_high, k);
    };
    theory = {mom(1), mom(2), mom(4)};
    const double m2c = mom(2) - mom(1) * mom(1);
    kurt_law = m2c > 0.0 ? (mom(4)) / (mom(2) * mom(2)) : 0.0;
  }

  const std::array<int, 3> orders{1, 2, 4};
  for (std::size_t i = 0; i < orders.size(); ++i) {
    MomentRow row;
    row.order = orders[i];
    row.empirical = series.moment(orders[i]);
    row.theoretical = theory[i];
    const double denom = std::abs(row.theoretical);
    row.gap = denom > 1e-12 ? std::abs(row.empirical - row.theoretical) / denom
                            : std::abs(row.empirical - row.theoretical);
    report.rows.push_back(row);
  }
  const double m2 = series.moment(2);
  const double m4 = series.moment(4);
  report.kurtosis_empirical = m4 / (m2 * m2);
  report.kurtosis_theoretical = kurt_law;
  return report;
}

std::vector<HistogramBin> make_histogram(const StandardizedSeries& series,
                                         const LimitLaw& law, int bins) {
  if (series.values.empty()) throw std::invalid_argument("empty series");
  if (bins < 1) throw std::invalid_argument("need at least one bin");
  const auto [lo_it, hi_it] =
      std::minmax_element(series.values.begin(), series.values.end());
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;

  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    out[static_cast<std::size_t>(b)].left = lo + b * width;
    out[static_cast<std::size_t>(b)].right = lo + (b + 1) * width;
  }
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    int b = static_cast<int>((series.values[i] - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    out[static_cast<std::size_t>(b)].count += series.weights[i];
  }

  for (auto& bin : out) {
    const double mid = 0.5 * (bin.left + bin.right);
    if (const auto* gauss = std::get_if<GaussianLaw>(&law)) {
      bin.theory_density =
          std::exp(-mid * mid / (2.0 * gauss->variance)) /
          std::sqrt(2.0 * 3.14159265358979323846 * gauss->variance);
    } else if (const auto* quartic = std::get_if<QuarticLaw>(&law)) {
      const double r = mid / quartic->scale;
      bin.theory_density = std::exp(-r * r * r * r) /
                           numeric::quartic_normalizer(quartic->scale);
    } else {
      bin.theory_density = 0.0;  // point masses have no density
    }
  }
  return out;
}

void write_histogram_csv(std::ostream& os,
                         const std::vector<HistogramBin>& bins) {
  os << "bin_left,bin_right,count,theory_density\n";
  char buf[160];
  for (const HistogramBin& b : bins) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", b.left,
                  b.right, b.count, b.theory_density);
    os << buf;
  }
}

}  // namespace ergkit
