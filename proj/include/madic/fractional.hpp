#pragma once

// Fractional-time m-adic random walk
//   D_t^beta u = -(1/Gamma_m(-alpha)) int (u(y) - u(x)) / |x - y|^{alpha+1} dy
// with Caputo time derivative: closed-form radial solutions for a point
// source and for the unit-ball indicator, the survival probability of Z_m,
// its power-law bounds, and residual checks of the equation itself.

#include <cstddef>
#include <vector>

#include "madic/haar.hpp"

namespace madic {

struct FractionalParams {
  int m = 3;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Throws DomainError unless m is a valid base, alpha > 0, 0 < beta <= 1.
void validate(const FractionalParams& p);

enum class InitialCondition { delta, unit_ball };

/// Contiguous shell range [lo, hi]; shell j holds |x|_m = m^j.
struct ShellWindow {
  int lo = -40;
  int hi = 40;
};

/// Point-source solution on the shell |x|_m = m^j.
double green_function(const FractionalParams& p, int j, double t);
/// Solution started from Omega(|x|_m <= 1) on the shell |x|_m = m^j.
double indicator_solution(const FractionalParams& p, int j, double t);
/// S(t) = int_{Z_m} u(x, t) dx for the unit-ball start; S(0) = 1.
double survival(const FractionalParams& p, double t);

/// Shell values of the solution at one time on a whole window, sharing the
/// Mittag-Leffler evaluations between shells.
std::vector<double> solution_profile(const FractionalParams& p, InitialCondition ic, double t,
                                     ShellWindow window);

/// Total probability carried by a profile: tabulated shells, the inner ball
/// below the window at the innermost value, nothing beyond the window.
double profile_mass(const FractionalParams& p, InitialCondition ic, double t,
                    ShellWindow window, const std::vector<double>& values);

inline constexpr int kMaxWindowExtent = 200;

/// Widens `start` by 10 shells on each side until the mass defect is below
/// `tolerance`; throws ToleranceError past +-kMaxWindowExtent.
ShellWindow auto_window(const FractionalParams& p, InitialCondition ic, double t,
                        ShellWindow start = {}, double tolerance = 1e-6);

/// Solution values on a shell window over a time grid; values[n][j - lo].
struct FractionalSolution {
  FractionalParams params;
  InitialCondition initial = InitialCondition::unit_ball;
  ShellWindow window;
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  /// Shell profile at times[n]; inner shells hold the innermost value.
  RadialFunction snapshot(std::size_t n) const;
};

/// Serial reference tabulation.
FractionalSolution tabulate_serial(const FractionalParams& p, InitialCondition ic,
                                   const std::vector<double>& times, ShellWindow window);
/// Same tabulation with times distributed over OpenMP threads; identical output.
FractionalSolution tabulate(const FractionalParams& p, InitialCondition ic,
                            const std::vector<double>& times, ShellWindow window);

/// t_k = T (k/K)^grade, k = 0..K.
std::vector<double> graded_times(double T, int K, double grade = 2.0);

enum class CaputoScheme {
  /// Piecewise quadratic in s = t^beta; exact for quadratics in t^beta.
  power_quadratic,
  /// Piecewise linear in s = t^beta; exact for a + b t^beta.
  power_l1,
  /// Piecewise linear in t (the classical L1 scheme).
  classical_l1,
};

/// max over shells and grid times t_1..t_K of |D_t^beta u - L u|, with L the
/// radial Vladimirov operator. For beta = 1 the time derivative is a
/// three-point difference at interior nodes. Throws DomainError when the
/// grid does not start at 0 or is not graded toward it.
double caputo_residual(const FractionalSolution& sol,
                       CaputoScheme scheme = CaputoScheme::power_quadratic);

/// Radial Vladimirov operator applied shell by shell to a tabulated u.
RadialFunction vladimirov_apply_radial(const RadialFunction& u, double alpha);

struct ThetaValue {
  double value = 0.0;
  double error = 0.0;
};

/// Theta_beta(alpha, t) = int_0^{t^beta} E_beta(-y) y^{1/alpha - 1} dy.
/// t = +infinity is accepted for alpha > 1 (or beta = 1).
ThetaValue theta(double beta, double alpha, double t);

/// Non-asymptotic bounds from comparing the survival sum with an integral:
/// (1/(alpha m ln m)) t^{-beta/alpha} Theta(alpha, t) <= S(t)
///   <= (m/(alpha ln m)) t^{-beta/alpha} Theta(alpha, t).
struct SurvivalBounds {
  double lower = 0.0;
  double upper = 0.0;
};
SurvivalBounds survival_bounds(const FractionalParams& p, double t);

/// Form of the large-t decay rate R(t):
///   theta_limit    t^{-beta/alpha} Theta_beta(alpha)          alpha > 1 or beta = 1
///   inverse_power  c alpha/(1 - alpha) t^{-beta}              alpha < 1
///   logarithmic    c beta t^{-beta} ln t                      alpha = 1
/// with c = sin(beta pi) Gamma(beta) / pi.
enum class RateBranch { theta_limit, inverse_power, logarithmic };

/// R(t) with the same constants as SurvivalBounds applied to it.
struct SurvivalRate {
  RateBranch branch;
  double rate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};
SurvivalRate survival_rate(const FractionalParams& p, double t);

const char* to_string(RateBranch b);

}  // namespace madic
