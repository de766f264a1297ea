#pragma once

#include <cmath>
#include <variant>

namespace ergkit {

inline constexpr const char* kVersion = "0.1.0";

/// Edge-triangle model parameters in the rescaled convention:
/// alpha weighs triangles, h weighs edges. The replica-symmetric
/// formulas require alpha > -2.
struct ModelParams {
  double alpha = 0.0;
  double h = 0.0;
};

inline constexpr double kAlphaCritical = 27.0 / 8.0;
inline const double kHCritical = std::log(2.0) - 1.5;
inline constexpr double kUCritical = 2.0 / 3.0;

/// Exact-parameter queries are the intended use, so the critical point is
/// matched with a tight absolute tolerance.
inline bool is_critical_point(const ModelParams& p, double tol = 1e-9) {
  return std::abs(p.alpha - kAlphaCritical) < tol &&
         std::abs(p.h - kHCritical) < tol;
}

enum class Phase { Uniqueness, CriticalCurve, CriticalPoint };

/// Phase of the scalar variational problem at given parameters.
/// Uniqueness carries the single maximizer in u_low (== u_high);
/// CriticalCurve carries both maximizers, increasing;
/// CriticalPoint carries the critical maximizer 2/3.
struct PhaseClass {
  Phase tag = Phase::Uniqueness;
  double u_low = 0.0;
  double u_high = 0.0;
};

/// Centered Gaussian limit with the given variance.
struct GaussianLaw {
  double variance = 0.0;
};

/// Quartic generalized Gaussian: density proportional to exp(-(y/scale)^4).
struct QuarticLaw {
  double scale = 0.0;
};

/// Two-atom mixture: kappa on atom_low, 1-kappa on atom_high.
struct MixtureLaw {
  double kappa = 0.0;
  double atom_low = 0.0;
  double atom_high = 0.0;
};

using LimitLaw = std::variant<GaussianLaw, QuarticLaw, MixtureLaw>;

}  // namespace ergkit
