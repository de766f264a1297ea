#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "ergkit/model.hpp"

namespace ergkit {

/// Raised when the two-phase bracketing needed by the curve tracer cannot
/// be established.
class CurveBracketingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary entropy-type term I(u) = u ln u + (1-u) ln(1-u), with the limit
/// convention I(0) = I(1) = 0.
double entropy(double u);

/// Energy function g(u) = (alpha/6) u^3 + (h/2) u - I(u)/2 on [0,1].
double energy_g(const ModelParams& p, double u);

/// First derivative of g (vanishes exactly at fixed points).
double energy_g_d1(const ModelParams& p, double u);

/// Second derivative of g.
double energy_g_d2(const ModelParams& p, double u);

/// logistic(alpha u^2 + h) - u. Zero iff u is a stationary point of g.
double fixed_point_residual(const ModelParams& p, double u);

/// Global maximizers of g on [0,1] (one or two, increasing), the free
/// energy sup g, and the fixed-point residual at each maximizer.
struct MaximizerSet {
  std::vector<double> maximizers;
  double free_energy = 0.0;
  std::vector<double> residuals;
};

/// Locates all global maximizers of the energy function by a dense grid
/// scan (20001 points) over the sign changes of the fixed-point residual,
/// followed by safeguarded Newton refinement per basin. Two maximizers are
/// reported when their g-values agree within 1e-10 and their locations
/// differ by more than 1e-4. Throws std::domain_error for alpha <= -2.
MaximizerSet find_maximizers(const ModelParams& p);

/// sup of the energy function (free energy of the model).
double free_energy(const ModelParams& p);

/// Uniqueness / CriticalCurve / CriticalPoint classification. The critical
/// point is matched within 1e-9 in both parameters.
PhaseClass classify_phase(const ModelParams& p);

struct CurvePoint {
  double alpha = 0.0;
  double h = 0.0;
  double u_low = 0.0;
  double u_high = 0.0;
};

/// For each alpha > 27/8 finds h = q(alpha) where the two local maxima of
/// g have equal value (gap < 1e-10 by 80 bisection steps on the signed
/// value gap, branch maxima tracked by continuation). Throws
/// CurveBracketingError when the two-maxima regime cannot be bracketed and
/// std::domain_error for grid points <= 27/8.
std::vector<CurvePoint> trace_critical_curve(std::span<const double> alpha_grid);

/// c = -g''(u*)/2 = (1 - 2 alpha u*^2 (1-u*)) / (4 u* (1-u*)).
double curvature_c(const ModelParams& p, double u_star);

/// Mixture weight of the low-density phase on the critical curve:
/// w_i = [1 - 2 alpha u_i^2 (1-u_i)]^{-1/2}, kappa = w_low/(w_low+w_high).
double mixture_kappa(double alpha, double u_low, double u_high);

/// Limit law of the triangle density fluctuation:
/// Gaussian(3 u^4 / (4c)) off criticality, quartic law with scale
/// 2^{7/2}/9 at the critical point, two-atom mixture of the cubed
/// maximizers on the curve.
LimitLaw limit_law_triangle(const ModelParams& p);

/// Clique generalization for ell in [3,5]; C = binom(ell,2).
/// Gaussian((C u^{C-1})^2 / (2 ell! c)) off criticality, quartic scale
/// gamma = 2^{C+1/2}/3^C * C at the critical point, mixture of u^C atoms
/// on the curve.
LimitLaw limit_law_clique(const ModelParams& p, int ell);

/// Large-deviation rate of the edge density: f - g(x). Nonnegative, zero
/// at the maximizers.
double rate_function(const ModelParams& p, double x);

/// Taylor coefficients a1..a4 of the rate function around a maximizer,
/// rate(u* +- d) = +-a1 d + a2 d^2 +- a3 d^3 + a4 d^4 + o(d^4).
/// a1 vanishes at fixed points, a2 equals curvature_c, and at the critical
/// point a1..a3 vanish with a4 = 81/64.
std::array<double, 4> rate_taylor_coefficients(const ModelParams& p,
                                               double u_star);

}  // namespace ergkit
