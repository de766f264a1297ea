#include "ergkit/scalar_landscape.hpp"

#include <algorithm>
#include <cmath>

#include "ergkit/numeric.hpp"

namespace ergkit {

namespace {

using numeric::logistic;

constexpr int kGridPoints = 20001;
constexpr double kGridLo = 1e-9;
constexpr double kGridHi = 1.0 - 1e-9;
constexpr double kTieValueGap = 1e-10;
constexpr double kTieLocationGap = 1e-4;

void require_unit_interval(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("argument outside [0,1]");
  }
}

void require_replica_symmetric(const ModelParams& p) {
  if (!(p.alpha > -2.0)) {
    throw std::domain_error("alpha <= -2 is outside the replica-symmetric regime");
  }
}

double log_odds(double u) { return std::log(u) - std::log1p(-u); }

// h value that makes u a stationary point of g.
double stationary_h(double alpha, double u) {
  return log_odds(u) - alpha * u * u;
}

// Safeguarded Newton on the fixed-point residual inside a bracket
// [lo, hi] with F(lo) > 0 > F(hi). Falls back to bisection whenever the
// Newton step leaves the bracket, so the interval shrinks at every
// iteration even at the degenerate critical root.
double refine_maximizer(const ModelParams& p, double lo, double hi) {
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    const double z = p.alpha * u * u + p.h;
    const double s = logistic(z);
    const double res = s - u;
    if (res > 0.0) {
      lo = u;
    } else if (res < 0.0) {
      hi = u;
    } else {
      return u;
    }
    const double deriv = s * (1.0 - s) * 2.0 * p.alpha * u - 1.0;
    double next = deriv != 0.0 ? u - res / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == u) break;
    u = next;
  }
  return u;
}

}  // namespace

double entropy(double u) {
  require_unit_interval(u);
  if (u == 0.0 || u == 1.0) return 0.0;
  return u * std::log(u) + (1.0 - u) * std::log1p(-u);
}

double energy_g(const ModelParams& p, double u) {
  return p.alpha / 6.0 * u * u * u + p.h / 2.0 * u - 0.5 * entropy(u);
}

double energy_g_d1(const ModelParams& p, double u) {
  require_unit_interval(u);
  return 0.5 * (p.alpha * u * u + p.h - log_odds(u));
}

double energy_g_d2(const ModelParams& p, double u) {
  require_unit_interval(u);
  return p.alpha * u - 0.5 / (u * (1.0 - u));
}

double fixed_point_residual(const ModelParams& p, double u) {
  return logistic(p.alpha * u * u + p.h) - u;
}

MaximizerSet find_maximizers(const ModelParams& p) {
  require_replica_symmetric(p);

  // The residual F has the sign of g', so each + -> - sign change along
  // the grid brackets one local maximum of g. Interior maximizers always
  // exist (g' -> +inf at 0 and -inf at 1); virtual endpoints catch
  // maximizers that fall below the first or above the last grid point.
  const double step = (kGridHi - kGridLo) / (kGridPoints - 1);
  std::vector<double> candidates;
  double prev_u = 1e-300;
  double prev_res = fixed_point_residual(p, prev_u);
  for (int i = 0; i <= kGridPoints; ++i) {
    const double u =
        i < kGridPoints ? kGridLo + step * i : 1.0 - 1e-15;
    const double res = fixed_point_residual(p, u);
    if (prev_res > 0.0 && res <= 0.0) {
      candidates.push_back(refine_maximizer(p, prev_u, u));
    }
    prev_u = u;
    prev_res = res;
  }

  // At extreme h the maximizer can sit between the last representable
  // scan point and the interval end; the scan then stays positive (or
  // starts negative) and the end point itself meets the residual
  // contract, |F| <= 1e-15 there.
  if (candidates.empty()) {
    if (fixed_point_residual(p, 1.0 - 1e-15) > 0.0) {
      candidates.push_back(1.0 - 1e-15);
    } else if (fixed_point_residual(p, 1e-300) < 0.0) {
      candidates.push_back(1e-300);
    }
  }

  // Keep the global maxima; merge numerical twins closer than the
  // location tolerance, then apply the value-gap tie rule.
  MaximizerSet out;
  if (candidates.empty()) {
    // Not reachable for alpha > -2; guards a degenerate all-negative scan.
    throw std::domain_error("no maximizer basin located");
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<double> values;
  values.reserve(candidates.size());
  for (double u : candidates) values.push_back(energy_g(p, u));
  const double best = *std::max_element(values.begin(), values.end());

  std::vector<double> keep;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (values[i] < best - kTieValueGap) continue;
    if (!keep.empty() &&
        candidates[i] - keep.back() <= kTieLocationGap) {
      if (energy_g(p, candidates[i]) > energy_g(p, keep.back())) {
        keep.back() = candidates[i];
      }
      continue;
    }
    keep.push_back(candidates[i]);
  }

  out.maximizers = std::move(keep);
  out.free_energy = best;
  for (double u : out.maximizers) {
    out.residuals.push_back(fixed_point_residual(p, u));
  }
  return out;
}

double free_energy(const ModelParams& p) { return find_maximizers(p).free_energy; }

PhaseClass classify_phase(const ModelParams& p) {
  require_replica_symmetric(p);
  if (is_critical_point(p)) {
    // The critical maximizer is known in closed form; the numeric locator
    // is noise-limited near the quartic degeneracy.
    return PhaseClass{Phase::CriticalPoint, kUCritical, kUCritical};
  }
  const MaximizerSet ms = find_maximizers(p);
  if (ms.maximizers.size() == 2) {
    return PhaseClass{Phase::CriticalCurve, ms.maximizers[0], ms.maximizers[1]};
  }
  return PhaseClass{Phase::Uniqueness, ms.maximizers[0], ms.maximizers[0]};
}

namespace {

// Spinodal points: roots of 2 alpha u^2 (1-u) = 1, bracketing the u range
// where stationary points are local maxima. Exist iff alpha > 27/8.
struct Spinodals {
  double low;   // in (0, 2/3)
  double high;  // in (2/3, 1)
};

Spinodals spinodal_points(double alpha) {
  const auto d = [alpha](double u) { return 2.0 * alpha * u * u * (1.0 - u) - 1.0; };
  auto bisect = [&d](double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if ((d(lo) > 0.0) == (d(mid) > 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  // d < 0 at both ends of (0,1) and d(2/3) > 0 for alpha > 27/8.
  return Spinodals{bisect(kUCritical, 1e-12), bisect(kUCritical, 1.0 - 1e-12)};
}

// Local maximum of g on the low branch (0, u_s1) or high branch (u_s2, 1)
// for a given h, refined from a continuation seed when available.
double branch_maximizer(const ModelParams& p, double lo, double hi) {
  // F > 0 at the left end of the bracket and F < 0 at the right end hold
  // throughout the bistable h-window on both branches.
  return refine_maximizer(p, lo, hi);
}

}  // namespace

std::vector<CurvePoint> trace_critical_curve(std::span<const double> alpha_grid) {
  std::vector<CurvePoint> out;
  out.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    if (!(alpha > kAlphaCritical)) {
      throw std::domain_error("critical curve is defined for alpha > 27/8");
    }
    const Spinodals sp = spinodal_points(alpha);
    // Bistable window in h: both branch maxima exist strictly inside
    // (h(u_high_spinodal), h(u_low_spinodal)).
    double h_lo = stationary_h(alpha, sp.high);
    double h_hi = stationary_h(alpha, sp.low);
    if (!(h_lo < h_hi)) {
      throw CurveBracketingError("two-maxima window is empty at alpha=" +
                                 std::to_string(alpha));
    }
    const auto gap = [&](double h) {
      const ModelParams q{alpha, h};
      const double u1 = branch_maximizer(q, 1e-300, sp.low);
      const double u2 = branch_maximizer(q, sp.high, 1.0 - 1e-15);
      return energy_g(q, u2) - energy_g(q, u1);
    };
    if (!(gap(h_lo) < 0.0 && gap(h_hi) > 0.0)) {
      throw CurveBracketingError("value gap does not change sign over the "
                                 "bistable window at alpha=" +
                                 std::to_string(alpha));
    }
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (h_lo + h_hi);
      if (gap(mid) > 0.0) {
        h_hi = mid;
      } else {
        h_lo = mid;
      }
    }
    const double h = 0.5 * (h_lo + h_hi);
    const ModelParams q{alpha, h};
    out.push_back(CurvePoint{alpha, h, branch_maximizer(q, 1e-300, sp.low),
                             branch_maximizer(q, sp.high, 1.0 - 1e-15)});
  }
  return out;
}

double curvature_c(const ModelParams& p, double u_star) {
  require_unit_interval(u_star);
  if (u_star == 0.0 || u_star == 1.0) {
    throw std::domain_error("curvature undefined at the interval endpoints");
  }
  return (1.0 - 2.0 * p.alpha * u_star * u_star * (1.0 - u_star)) /
         (4.0 * u_star * (1.0 - u_star));
}

double mixture_kappa(double alpha, double u_low, double u_high) {
  const double w1 =
      1.0 / std::sqrt(1.0 - 2.0 * alpha * u_low * u_low * (1.0 - u_low));
  const double w2 =
      1.0 / std::sqrt(1.0 - 2.0 * alpha * u_high * u_high * (1.0 - u_high));
  return w1 / (w1 + w2);
}

LimitLaw limit_law_triangle(const ModelParams& p) {
  const PhaseClass phase = classify_phase(p);
  switch (phase.tag) {
    case Phase::CriticalPoint:
      return QuarticLaw{std::pow(2.0, 3.5) / 9.0};
    case Phase::CriticalCurve: {
      const double kappa = mixture_kappa(p.alpha, phase.u_low, phase.u_high);
      return MixtureLaw{kappa, std::pow(phase.u_low, 3),
                        std::pow(phase.u_high, 3)};
    }
    case Phase::Uniqueness:
    default: {
      const double u = phase.u_low;
      const double c = curvature_c(p, u);
      return GaussianLaw{3.0 * std::pow(u, 4) / (4.0 * c)};
    }
  }
}

LimitLaw limit_law_clique(const ModelParams& p, int ell) {
  if (ell < 3 || ell > 5) {
    throw std::domain_error("clique size must be in [3,5]");
  }
  const double C = static_cast<double>(ell) * (ell - 1) / 2.0;
  double factorial = 1.0;
  for (int i = 2; i <= ell; ++i) factorial *= i;

  const PhaseClass phase = classify_phase(p);
  switch (phase.tag) {
    case Phase::CriticalPoint:
      return QuarticLaw{std::pow(2.0, C + 0.5) / std::pow(3.0, C) * C};
    case Phase::CriticalCurve: {
      const double kappa = mixture_kappa(p.alpha, phase.u_low, phase.u_high);
      return MixtureLaw{kappa, std::pow(phase.u_low, C),
                        std::pow(phase.u_high, C)};
    }
    case Phase::Uniqueness:
    default: {
      const double u = phase.u_low;
      const double c = curvature_c(p, u);
      const double slope = C * std::pow(u, C - 1.0);
      return GaussianLaw{slope * slope / (2.0 * factorial * c)};
    }
  }
}

double rate_function(const ModelParams& p, double x) {
  require_replica_symmetric(p);
  require_unit_interval(x);
  return free_energy(p) - energy_g(p, x);
}

std::array<double, 4> rate_taylor_coefficients(const ModelParams& p,
                                               double u_star) {
  require_unit_interval(u_star);
  if (u_star == 0.0 || u_star == 1.0) {
    throw std::domain_error("expansion undefined at the interval endpoints");
  }
  const double u = u_star;
  const double v = 1.0 - u;
  const double a1 = 0.5 * (log_odds(u) - p.alpha * u * u - p.h);
  const double a2 = 0.5 * (0.5 / (u * v) - p.alpha * u);
  const double a3 = 0.5 * ((2.0 * u - 1.0) / (6.0 * u * u * v * v) - p.alpha / 3.0);
  const double a4 = (3.0 * u * u - 3.0 * u + 1.0) / (24.0 * u * u * u * v * v * v);
  return {a1, a2, a3, a4};
}

}  // namespace ergkit
