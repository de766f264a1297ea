#include "ergkit/meanfield_exact.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <ostream>
#include <thread>

#include "ergkit/numeric.hpp"

namespace ergkit {

namespace {

int env_thread_cap() {
  if (const char* s = std::getenv("ERGKIT_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double g5_at(double u) {
  const double v = 1.0 - u;
  return 3.0 / (u * u * u * u) - 3.0 / (v * v * v * v);
}

double g3_at(const ModelParams& p, double u) {
  const double v = 1.0 - u;
  return p.alpha - 0.5 * (1.0 / (v * v) - 1.0 / (u * u));
}

}  // namespace

double EdgeDensityPmf::prob_at_index(std::int64_t i) const {
  return std::exp((log_weights[static_cast<std::size_t>(i)] - log_shift) -
                  log_norm);
}

EdgeDensityPmf build_pmf(int n, const ModelParams& p) {
  if (n < 3) throw std::domain_error("pmf needs n >= 3");
  EdgeDensityPmf pmf;
  pmf.n = n;
  pmf.params = p;
  const std::int64_t N = pmf.num_pairs();
  const double scale = 2.0 * static_cast<double>(N);
  const double lgN = std::lgamma(static_cast<double>(N) + 1.0);
  pmf.log_weights.resize(static_cast<std::size_t>(N) + 1);
  double* lw = pmf.log_weights.data();

  // Fixed-size blocks keep the fill bit-identical for any thread count.
  const std::int64_t block = 1 << 16;
  const std::int64_t num_blocks = (N + block) / block;
  const auto fill = [&](std::int64_t b) {
    const std::int64_t lo = b * block;
    const std::int64_t hi = std::min(N + 1, lo + block);
    for (std::int64_t k = lo; k < hi; ++k) {
      const double m = static_cast<double>(k) / static_cast<double>(N);
      const double lchoose = lgN -
                             std::lgamma(static_cast<double>(k) + 1.0) -
                             std::lgamma(static_cast<double>(N - k) + 1.0);
      lw[k] = lchoose + scale * (p.alpha / 6.0 * m * m * m + p.h / 2.0 * m);
    }
  };
  const int threads = std::min<std::int64_t>(env_thread_cap(), num_blocks);
  if (threads <= 1) {
    for (std::int64_t b = 0; b < num_blocks; ++b) fill(b);
  } else {
    std::vector<std::future<void>> futures;
    futures.reserve(threads);
    std::atomic<std::int64_t> next{0};
    for (int t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, [&] {
        for (std::int64_t b = next.fetch_add(1); b < num_blocks;
             b = next.fetch_add(1)) {
          fill(b);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }

  const numeric::LogSumExpParts parts =
      numeric::log_sum_exp_parts(pmf.log_weights);
  pmf.log_shift = parts.shift;
  pmf.log_norm = parts.log_sum;
  return pmf;
}

double pmf_expect(const EdgeDensityPmf& pmf,
                  const std::function<double(double)>& f) {
  const double* lw = pmf.log_weights.data();
  const double shift = pmf.log_shift;
  const double norm = pmf.log_norm;
  const std::int64_t k0 = pmf.k_begin;
  const double N = static_cast<double>(pmf.num_pairs());
  return numeric::stable_sum_transform(
      pmf.support_size(), [lw, shift, norm, k0, N, &f](std::int64_t i) {
        const double m = static_cast<double>(k0 + i) / N;
        return std::exp((lw[i] - shift) - norm) * f(m);
      });
}

double moment(const EdgeDensityPmf& pmf, int k) {
  if (k < 1) throw std::domain_error("moment order must be >= 1");
  return pmf_expect(pmf, [k](double m) { return std::pow(m, k); });
}

double triangle_variance(const EdgeDensityPmf& pmf) {
  const double mean = moment(pmf, 3);
  const double var = pmf_expect(pmf, [mean](double m) {
    const double d = m * m * m - mean;
    return d * d;
  });
  return pmf.effective_n_sq() * var / 36.0;
}

namespace {

void check_window_delta(const ModelParams& p, double delta) {
  if (is_critical_point(p)) {
    if (!(delta > 0.0 && delta < 3.0 / 8.0)) {
      throw std::domain_error("window exponent must lie in (0, 3/8) at the critical point");
    }
  } else if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("window exponent must lie in (0, 1)");
  }
}

struct KRange {
  std::int64_t lo;
  std::int64_t hi;  // inclusive
};

KRange window_range(std::int64_t N, double center, double half_width) {
  const double lo = (center - half_width) * static_cast<double>(N);
  const double hi = (center + half_width) * static_cast<double>(N);
  return {std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(lo))),
          std::min<std::int64_t>(N, static_cast<std::int64_t>(std::floor(hi)))};
}

}  // namespace

EdgeDensityPmf conditional_pmf(const EdgeDensityPmf& pmf,
                               const WindowSpec& window,
                               const MaximizerSet& maximizers) {
  if (window.center_index < 1 ||
      window.center_index > static_cast<int>(maximizers.maximizers.size())) {
    throw std::invalid_argument("window center index out of range");
  }
  check_window_delta(pmf.params, window.delta);
  const double u = maximizers.maximizers[window.center_index - 1];
  const double half = std::pow(static_cast<double>(pmf.n), -window.delta);
  const std::int64_t N = pmf.num_pairs();
  KRange r = window_range(N, u, half);
  // Intersect with the stored support.
  r.lo = std::max(r.lo, pmf.k_begin);
  r.hi = std::min(r.hi, pmf.k_begin + pmf.support_size() - 1);
  if (r.lo > r.hi) {
    throw EmptyWindowError("no lattice point inside the conditioning window");
  }
  EdgeDensityPmf out;
  out.n = pmf.n;
  out.params = pmf.params;
  out.k_begin = r.lo;
  out.log_weights.assign(
      pmf.log_weights.begin() + static_cast<std::size_t>(r.lo - pmf.k_begin),
      pmf.log_weights.begin() +
          static_cast<std::size_t>(r.hi - pmf.k_begin + 1));
  const numeric::LogSumExpParts parts =
      numeric::log_sum_exp_parts(out.log_weights);
  out.log_shift = parts.shift;
  out.log_norm = parts.log_sum;
  return out;
}

std::vector<double> riemann_D(int n, const ModelParams& p,
                              const MaximizerSet& maximizers, double delta) {
  if (n < 3) throw std::domain_error("riemann_D needs n >= 3");
  check_window_delta(p, delta);
  const std::int64_t N = static_cast<std::int64_t>(n) * (n - 1) / 2;
  const double nt = std::sqrt(2.0 * static_cast<double>(N));

  // The integrand's 1/sqrt(m(1-m)) prefactor excludes the empty and
  // complete graph endpoints (their Gaussian factor underflows anyway).
  const auto clamp_interior = [N](KRange r) {
    r.lo = std::max<std::int64_t>(r.lo, 1);
    r.hi = std::min<std::int64_t>(r.hi, N - 1);
    return r;
  };

  std::vector<double> out;
  if (is_critical_point(p)) {
    const double u = kUCritical;
    const double kc = g5_at(u) / 120.0;
    const double sqnt = std::sqrt(nt);
    const KRange r = clamp_interior(window_range(N, u, std::pow(nt, -delta)));
    const double sum = numeric::stable_sum_transform(
        r.hi - r.lo + 1, [&](std::int64_t i) {
          const double m =
              static_cast<double>(r.lo + i) / static_cast<double>(N);
          const double y = sqnt * (m - u);
          const double y4 = y * y * y * y;
          return std::exp(-81.0 / 64.0 * y4 + kc * y4 * y / sqnt) /
                 std::sqrt(m * (1.0 - m));
        });
    out.push_back(2.0 / (nt * sqnt) * sum);
    return out;
  }

  for (double u : maximizers.maximizers) {
    const double c = curvature_c(p, u);
    const double kcub = g3_at(p, u) / 6.0;
    const KRange r = clamp_interior(window_range(N, u, std::pow(nt, -delta)));
    const double sum = numeric::stable_sum_transform(
        r.hi - r.lo + 1, [&](std::int64_t i) {
          const double m =
              static_cast<double>(r.lo + i) / static_cast<double>(N);
          const double x = nt * (m - u);
          return std::exp(-c * x * x + kcub * x * x * x / nt) /
                 std::sqrt(m * (1.0 - m));
        });
    out.push_back(2.0 / nt * sum);
  }
  return out;
}

MixtureMass mixture_mass(const EdgeDensityPmf& pmf,
                         const MaximizerSet& maximizers) {
  if (maximizers.maximizers.size() != 2) {
    throw std::invalid_argument("mixture mass needs exactly two maximizers");
  }
  const double delta = 0.3;
  const double half = std::pow(static_cast<double>(pmf.n), -delta);
  const double u1 = maximizers.maximizers[0];
  const double u2 = maximizers.maximizers[1];
  if (u1 + half >= u2 - half) {
    throw std::invalid_argument("maximizer windows overlap");
  }
  const std::int64_t N = pmf.num_pairs();
  const std::int64_t k_end = pmf.k_begin + pmf.support_size() - 1;
  KRange r1 = window_range(N, u1, half);
  KRange r2 = window_range(N, u2, half);
  r1.lo = std::max(r1.lo, pmf.k_begin);
  r1.hi = std::min(r1.hi, k_end);
  r2.lo = std::max(r2.lo, pmf.k_begin);
  r2.hi = std::min(r2.hi, k_end);
  const auto mass = [&](const KRange& r) {
    if (r.lo > r.hi) return 0.0;
    return numeric::stable_sum_transform(r.hi - r.lo + 1, [&](std::int64_t i) {
      return pmf.prob_at_index(r.lo + i - pmf.k_begin);
    });
  };
  const double m1 = mass(r1);
  const double m2 = mass(r2);
  // Remainder summed directly over the outside points so it stays
  // meaningful when the windows carry all but ~1e-16 of the mass.
  double rem = 0.0;
  const auto outside = [&](std::int64_t lo, std::int64_t hi) {
    if (lo > hi) return 0.0;
    return numeric::stable_sum_transform(hi - lo + 1, [&](std::int64_t i) {
      return pmf.prob_at_index(lo + i - pmf.k_begin);
    });
  };
  rem += outside(pmf.k_begin, std::min(r1.lo - 1, k_end));
  rem += outside(std::max(r1.hi + 1, pmf.k_begin), r2.lo - 1);
  rem += outside(r2.hi + 1, k_end);
  const double total = m1 + m2;
  return MixtureMass{m1 / total, m2 / total, rem};
}

std::vector<SpeedRow> convergence_speed_table(const ModelParams& p,
                                              std::span<const int> n_list) {
  const PhaseClass phase = classify_phase(p);
  if (phase.tag == Phase::CriticalCurve) {
    throw std::invalid_argument(
        "convergence speed is not defined unconditionally on the critical curve");
  }
  const bool critical = phase.tag == Phase::CriticalPoint;
  const double u = critical ? kUCritical : phase.u_low;
  const double target = u * u * u;

  double limit_abs = 0.0;
  if (critical) {
    limit_abs = numeric::quartic_abs_moment(std::pow(2.0, 3.5) / 9.0, 1);
  } else {
    const double c = curvature_c(p, u);
    const double var = 9.0 * std::pow(u, 4) / (2.0 * c);
    limit_abs = std::sqrt(2.0 * var / 3.14159265358979323846);
  }

  std::vector<SpeedRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    const EdgeDensityPmf pmf = build_pmf(n, p);
    const double scale = critical ? std::sqrt(static_cast<double>(n))
                                  : static_cast<double>(n);
    const double mean_gap = std::abs(moment(pmf, 3) - target);
    const double abs_gap = pmf_expect(
        pmf, [target](double m) { return std::abs(m * m * m - target); });
    rows.push_back(SpeedRow{n, scale * mean_gap, scale * abs_gap, limit_abs});
  }
  return rows;
}

void write_pmf_csv(std::ostream& os, const EdgeDensityPmf& pmf) {
  os << "k,m,log_weight,prob\n";
  char buf[128];
  for (std::int64_t i = 0; i < pmf.support_size(); ++i) {
    const std::int64_t k = pmf.k_begin + i;
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(k), pmf.density(k),
                  pmf.log_weights[static_cast<std::size_t>(i)],
                  pmf.prob_at_index(i));
    os << buf;
  }
}

}  // namespace ergkit
