#include "ergkit/numeric.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ergkit::numeric {

namespace {

constexpr std::int64_t kBlock = 1024;

// Neumaier-compensated sum of a contiguous block.
double block_sum(const double* v, std::int64_t count) {
  double sum = 0.0, comp = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    const double t = sum + v[i];
    if (std::abs(sum) >= std::abs(v[i])) {
      comp += (sum - t) + v[i];
    } else {
      comp += (v[i] - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double block_sum_transform(std::int64_t begin, std::int64_t count,
                           const std::function<double(std::int64_t)>& f) {
  double sum = 0.0, comp = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    const double x = f(begin + i);
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double tree_sum(const double* v, std::int64_t count) {
  if (count <= kBlock) return block_sum(v, count);
  const std::int64_t half = count / 2;
  return tree_sum(v, half) + tree_sum(v + half, count - half);
}

double tree_sum_transform(std::int64_t begin, std::int64_t count,
                          const std::function<double(std::int64_t)>& f) {
  if (count <= kBlock) return block_sum_transform(begin, count, f);
  const std::int64_t half = count / 2;
  return tree_sum_transform(begin, half, f) +
         tree_sum_transform(begin + half, count - half, f);
}

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double stable_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return tree_sum(values.data(), static_cast<std::int64_t>(values.size()));
}

double stable_sum_transform(std::int64_t count,
                            const std::function<double(std::int64_t)>& f) {
  if (count <= 0) return 0.0;
  return tree_sum_transform(0, count, f);
}

LogSumExpParts log_sum_exp_parts(std::span<const double> values) {
  if (values.empty()) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  double max = -std::numeric_limits<double>::infinity();
  for (double v : values) max = std::max(max, v);
  if (!std::isfinite(max)) return {max, 0.0};
  const double* data = values.data();
  const double sum = stable_sum_transform(
      static_cast<std::int64_t>(values.size()),
      [data, max](std::int64_t i) { return std::exp(data[i] - max); });
  return {max, std::log(sum)};
}

double log_sum_exp(std::span<const double> values) {
  return log_sum_exp_parts(values).total();
}

double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  // A fixed pre-split keeps localized or symmetric integrands from fooling
  // the three-point termination test on the first level.
  constexpr int kPanels = 32;
  const double width = (b - a) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + i * width;
    const double hi = i + 1 == kPanels ? b : a + (i + 1) * width;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    const double whole = simpson(lo, flo, hi, fhi, fmid);
    total += adaptive(f, lo, flo, hi, fhi, mid, fmid, whole, tol / kPanels, 44);
  }
  return total;
}

double gaussian_cdf(double x, double variance) {
  if (variance <= 0.0) throw std::domain_error("gaussian_cdf: variance <= 0");
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

namespace {

// The quartic density is below 1e-320 past |y| > 6.1*scale.
double quartic_cutoff(double scale) { return 6.2 * scale; }

double quartic_exp(double y, double scale) {
  const double r = y / scale;
  const double r2 = r * r;
  return std::exp(-r2 * r2);
}

}  // namespace

double quartic_normalizer(double scale) {
  if (scale <= 0.0) throw std::domain_error("quartic law: scale <= 0");
  const double R = quartic_cutoff(scale);
  return integrate([scale](double y) { return quartic_exp(y, scale); }, -R, R,
                   1e-12 * scale);
}

double quartic_abs_moment(double scale, int k) {
  const double R = quartic_cutoff(scale);
  const double raw = integrate(
      [scale, k](double y) {
        return std::pow(std::abs(y), k) * quartic_exp(y, scale);
      },
      -R, R, 1e-12 * std::pow(scale, k + 1));
  return raw / quartic_normalizer(scale);
}

double quartic_cdf(double y, double scale) {
  const double R = quartic_cutoff(scale);
  if (y <= -R) return 0.0;
  if (y >= R) return 1.0;
  const double z = quartic_normalizer(scale);
  return integrate([scale](double t) { return quartic_exp(t, scale); }, -R, y,
                   1e-12 * scale) /
         z;
}

}  // namespace ergkit::numeric
