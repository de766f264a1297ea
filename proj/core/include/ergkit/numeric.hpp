#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>

namespace ergkit::numeric {

/// Deterministic compensated sum: pairwise tree over blocks, Neumaier
/// within a block. Error is O(eps) independent of length and of any
/// thread count used by the caller to produce the data.
double stable_sum(std::span<const double> values);

/// stable_sum over f(i) for i in [0, count) without materializing the terms.
double stable_sum_transform(std::int64_t count,
                            const std::function<double(std::int64_t)>& f);

/// log(sum_i exp(v_i)) with a running max and a pairwise-reduced mantissa sum.
double log_sum_exp(std::span<const double> values);

/// log-sum-exp split into shift (the max) and log of the shifted sum.
/// Keeping the parts separate avoids the ulp(shift) quantization that
/// adding them would impose on downstream exp(v - total) evaluations.
struct LogSumExpParts {
  double shift = 0.0;
  double log_sum = 0.0;
  double total() const { return shift + log_sum; }
};
LogSumExpParts log_sum_exp_parts(std::span<const double> values);

/// log of the binomial coefficient via lgamma.
double log_choose(std::int64_t n, std::int64_t k);

/// 1/(1+e^-z) without overflow on either tail.
double logistic(double z);

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

/// CDF of a centered Gaussian with the given variance.
double gaussian_cdf(double x, double variance);

/// Normalization constant of the quartic density exp(-(y/scale)^4),
/// computed by quadrature rather than transcribed gamma constants.
double quartic_normalizer(double scale);

/// k-th absolute moment E|Y|^k of the normalized quartic law.
double quartic_abs_moment(double scale, int k);

/// CDF of the normalized quartic law.
double quartic_cdf(double y, double scale);

}  // namespace ergkit::numeric
