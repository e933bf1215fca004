#include "madic/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <fmt/format.h>

#include "madic/levy.hpp"
#include "madic/mittag_leffler.hpp"

namespace madic {

void validate(const FractionalParams& p) {
  check_base(p.m);
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
    throw DomainError(fmt::format("alpha must be positive, got {}", p.alpha));
  if (!(p.beta > 0.0 && p.beta <= 1.0))
    throw DomainError(fmt::format("beta must lie in (0, 1], got {}", p.beta));
}

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError(fmt::format("time must be finite and nonnegative, got {}", t));
}

// Number of terms after which the geometric weights m^{-i} drop below 1e-17.
int series_terms(int m) {
  return static_cast<int>(std::ceil(17.0 * std::log(10.0) / std::log(m))) + 1;
}

// E_beta(-y_n) and 1 - E_beta(-y_n) for y_n = m^{-n alpha} t^beta, n in
// [lo, hi].
class MittagLefflerTable {
 public:
  MittagLefflerTable(const FractionalParams& p, double t, int lo, int hi) : lo_(lo) {
    const double log_tb = t > 0.0 ? p.beta * std::log(t) : 0.0;
    const double log_m = std::log(p.m);
    for (int n = lo; n <= hi; ++n) {
      const double y = t > 0.0 ? std::exp(log_tb - n * p.alpha * log_m) : 0.0;
      y_.push_back(y);
      e_.push_back(mittag_leffler(p.beta, -y));
      c_.push_back(mittag_leffler_complement(p.beta, y));
    }
  }
  double y(int n) const { return y_[index(n)]; }
  double e(int n) const { return e_[index(n)]; }
  double c(int n) const { return c_[index(n)]; }

 private:
  std::size_t index(int n) const { return static_cast<std::size_t>(n - lo_); }
  int lo_;
  std::vector<double> y_, e_, c_;
};

// u on the shell |x| = m^j for the point source, written as
//   m^{-j} [ (1 - 1/m) sum_{i >= 0} m^{-i} E_{j+i} - E_{j-1} ].
// The prefactor m^{-j} makes terms up to shell j + i ~ 0 matter for inner
// shells, so the sum runs to shell index `terms` at least. When E_{j-1} is
// close to 1 the same quantity is evaluated through the complements, which
// keeps every term nonnegative.
double green_from_table(const FractionalParams& p, const MittagLefflerTable& ml, int j,
                        int terms) {
  const double w = 1.0 - 1.0 / p.m;
  const int last = std::max(terms, terms - j);
  double sum = 0.0;
  double weight = 1.0;  // m^{-i}
  if (ml.y(j - 1) <= 1.0) {
    const double c0 = ml.c(j - 1);
    for (int i = 0; i <= last; ++i) {
      sum += w * weight * (c0 - ml.c(j + i));
      weight /= p.m;
    }
    sum += weight * (c0 - ml.c(j + last));
  } else {
    for (int i = 0; i <= last; ++i) {
      sum += w * weight * ml.e(j + i);
      weight /= p.m;
    }
    sum += weight * ml.e(j + last) - ml.e(j - 1);
  }
  return mpow(p.m, -j) * sum;
}

// 1 - (1 - 1/m) sum_{i >= 0} m^{-i} (1 - E_i)
double survival_from_table(const FractionalParams& p, const MittagLefflerTable& ml,
                           int terms) {
  const double w = 1.0 - 1.0 / p.m;
  double lost = 0.0;
  double weight = 1.0;
  for (int i = 0; i <= terms; ++i) {
    lost += w * weight * ml.c(i);
    weight /= p.m;
  }
  lost += weight * ml.c(terms);
  return 1.0 - lost;
}

}  // namespace

std::vector<double> solution_profile(const FractionalParams& p, InitialCondition ic, double t,
                                     ShellWindow window) {
  validate(p);
  check_time(t);
  if (window.lo > window.hi) throw DomainError("empty shell window");
  const int terms = series_terms(p.m);
  const int lo = std::min(window.lo, 1) - 1;
  const int hi = std::max(window.hi, 0) + terms + 1;
  const MittagLefflerTable ml(p, t, lo, hi);

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(window.hi - window.lo + 1));
  const double inside = ic == InitialCondition::unit_ball ? survival_from_table(p, ml, terms)
                                                          : 0.0;
  for (int j = window.lo; j <= window.hi; ++j) {
    if (ic == InitialCondition::unit_ball && j <= 0)
      out.push_back(inside);
    else
      out.push_back(green_from_table(p, ml, j, terms));
  }
  return out;
}

double green_function(const FractionalParams& p, int j, double t) {
  return solution_profile(p, InitialCondition::delta, t, {j, j}).front();
}

double indicator_solution(const FractionalParams& p, int j, double t) {
  return solution_profile(p, InitialCondition::unit_ball, t, {j, j}).front();
}

double survival(const FractionalParams& p, double t) {
  return indicator_solution(p, 0, t);
}

double profile_mass(const FractionalParams& p, InitialCondition ic, double t,
                    ShellWindow window, const std::vector<double>& values) {
  if (values.size() != static_cast<std::size_t>(window.hi - window.lo + 1))
    throw DomainError("profile does not match its window");
  if (ic == InitialCondition::delta && t == 0.0) return 1.0;
  double mass = ball_measure(p.m, window.lo - 1) * values.front();
  for (int j = window.lo; j <= window.hi; ++j)
    mass += sphere_measure(p.m, j) * values[static_cast<std::size_t>(j - window.lo)];
  return mass;
}

ShellWindow auto_window(const FractionalParams& p, InitialCondition ic, double t,
                        ShellWindow start, double tolerance) {
  ShellWindow w = start;
  double defect = std::numeric_limits<double>::infinity();
  while (w.lo >= -kMaxWindowExtent && w.hi <= kMaxWindowExtent) {
    defect = std::abs(1.0 - profile_mass(p, ic, t, w, solution_profile(p, ic, t, w)));
    if (defect < tolerance) return w;
    w.lo -= 10;
    w.hi += 10;
  }
  throw ToleranceError("mass defect", defect, tolerance);
}

// ------------------------------------------------------------ tabulation

RadialFunction FractionalSolution::snapshot(std::size_t n) const {
  std::vector<cplx> v(values.at(n).begin(), values.at(n).end());
  return RadialFunction::tabulated(params.m, window.lo, std::move(v),
                                   RadialFunction::Tail::hold, RadialFunction::Tail::zero);
}

namespace {

FractionalSolution prepare(const FractionalParams& p, InitialCondition ic,
                           const std::vector<double>& times, ShellWindow window) {
  validate(p);
  for (double t : times) check_time(t);
  FractionalSolution sol{p, ic, window, times, {}};
  sol.values.resize(times.size());
  return sol;
}

}  // namespace

FractionalSolution tabulate_serial(const FractionalParams& p, InitialCondition ic,
                                   const std::vector<double>& times, ShellWindow window) {
  auto sol = prepare(p, ic, times, window);
  for (std::size_t n = 0; n < times.size(); ++n)
    sol.values[n] = solution_profile(p, ic, times[n], window);
  return sol;
}

FractionalSolution tabulate(const FractionalParams& p, InitialCondition ic,
                            const std::vector<double>& times, ShellWindow window) {
  auto sol = prepare(p, ic, times, window);
  const auto count = static_cast<std::int64_t>(times.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t n = 0; n < count; ++n) {
    const auto i = static_cast<std::size_t>(n);
    sol.values[i] = solution_profile(p, ic, times[i], window);
  }
  return sol;
}

std::vector<double> graded_times(double T, int K, double grade) {
  if (!(T > 0.0) || K < 1 || !(grade >= 1.0))
    throw DomainError("graded grid needs T > 0, K >= 1 and grade >= 1");
  std::vector<double> t(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) t[static_cast<std::size_t>(k)] = T * std::pow(double(k) / K, grade);
  t.back() = T;
  return t;
}

// ------------------------------------------------------------ residuals

RadialFunction vladimirov_apply_radial(const RadialFunction& u, double alpha) {
  if (!u.is_tabulated()) throw DomainError("Vladimirov operator needs a tabulated function");
  const auto kernel = LevyKernel::vladimirov(u.base(), alpha);
  std::vector<cplx> out;
  for (int j = u.j_lo(); j <= u.j_hi(); ++j) out.emplace_back(apply_radial_kernel(kernel, u, j));
  return RadialFunction::tabulated(u.base(), u.j_lo(), std::move(out));
}

namespace {

void check_graded(const std::vector<double>& t) {
  const std::size_t K = t.size() - 1;
  if (t.size() < 3 || t.front() != 0.0)
    throw DomainError("Caputo grid must start at t = 0 and have at least three points");
  const double T = t.back();
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw DomainError("Caputo grid times must increase");
  for (std::size_t k = 2; k < t.size(); ++k)
    if (t[k] - t[k - 1] < (t[k - 1] - t[k - 2]) * (1.0 - 1e-9))
      throw DomainError("Caputo grid not graded: steps shrink away from t = 0");
  if (t[1] >= 0.5 * T / static_cast<double>(K))
    throw DomainError("Caputo grid not graded: first step is not refined near t = 0");
}

// Discrete Caputo derivative at t_n as a linear form in the node values:
// D u(t_n) = sum_k weights[n][k] u_k.
//
// The power schemes interpolate u in s = tau^beta. Writing the Caputo
// integral in s, (1/Gamma(1-beta)) int U'(s) (t_n - s^{1/beta})^{-beta} ds,
// the moments over [s_k, s_{k+1}] are incomplete beta functions of
// x = tau / t_n:
//   int K ds   = beta B(beta, 1-beta)       [I_x(beta, 1-beta)]
//   int s K ds = beta t_n^beta B(2beta, 1-beta) [I_x(2beta, 1-beta)]
std::vector<std::vector<double>> caputo_weights(const std::vector<double>& t, double beta,
                                                CaputoScheme scheme) {
  const std::size_t K = t.size() - 1;
  std::vector<std::vector<double>> w(K + 1, std::vector<double>(K + 1, 0.0));
  if (scheme == CaputoScheme::classical_l1) {
    const double g = std::tgamma(2.0 - beta);
    for (std::size_t n = 1; n <= K; ++n)
      for (std::size_t k = 0; k < n; ++k) {
        const double c = (std::pow(t[n] - t[k], 1.0 - beta) -
                          std::pow(t[n] - t[k + 1], 1.0 - beta)) /
                         ((t[k + 1] - t[k]) * g);
        w[n][k + 1] += c;
        w[n][k] -= c;
      }
    return w;
  }

  std::vector<double> s(K + 1);
  for (std::size_t k = 0; k <= K; ++k) s[k] = std::pow(t[k], beta);
  const double inv_g = 1.0 / std::tgamma(1.0 - beta);
  const double b0 = beta * std::tgamma(beta) * std::tgamma(1.0 - beta);
  const double b1 = beta * std::tgamma(2.0 * beta) * std::tgamma(1.0 - beta) /
                    std::tgamma(1.0 + beta);
  for (std::size_t n = 1; n <= K; ++n) {
    // Upper regularized tails Q = 1 - I_x, accurate near x = 1.
    std::vector<double> q0(n + 1), q1(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double x = t[k] / t[n];
      q0[k] = x >= 1.0 ? 0.0 : boost::math::ibetac(beta, 1.0 - beta, x);
      q1[k] = x >= 1.0 ? 0.0 : boost::math::ibetac(2.0 * beta, 1.0 - beta, x);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double m0 = b0 * (q0[k] - q0[k + 1]);
      if (scheme == CaputoScheme::power_l1) {
        const double c = inv_g * m0 / (s[k + 1] - s[k]);
        w[n][k + 1] += c;
        w[n][k] -= c;
        continue;
      }
      // Quadratic through three neighbouring nodes: the interval itself plus
      // its left neighbour, or the right one on the first interval.
      const double m1 = b1 * s[n] * (q1[k] - q1[k + 1]);
      const std::size_t i0 = k == 0 ? 0 : k - 1;
      const double p0 = s[i0], p1 = s[i0 + 1], p2 = s[i0 + 2];
      // U'(s) = f01 + f012 (2 s - p0 - p1) with divided differences f01, f012;
      // over the interval this integrates against the moments as
      // f01 m0 + f012 ((2 s_k - p0 - p1) m0 + 2 (m1 - s_k m0)).
      const double c01 = inv_g * m0;
      const double c012 = inv_g * ((2.0 * s[k] - p0 - p1) * m0 + 2.0 * (m1 - s[k] * m0));
      const double h01 = p1 - p0, h12 = p2 - p1, h02 = p2 - p0;
      // f01 = (U1 - U0) / h01
      w[n][i0] -= c01 / h01;
      w[n][i0 + 1] += c01 / h01;
      // f012 = ((U2 - U1) / h12 - (U1 - U0) / h01) / h02
      w[n][i0] += c012 / (h01 * h02);
      w[n][i0 + 1] -= c012 * (1.0 / h12 + 1.0 / h01) / h02;
      w[n][i0 + 2] += c012 / (h12 * h02);
    }
  }
  return w;
}

}  // namespace

double caputo_residual(const FractionalSolution& sol, CaputoScheme scheme) {
  const auto& t = sol.times;
  const FractionalParams& p = sol.params;
  validate(p);
  if (t.size() != sol.values.size()) throw DomainError("solution values do not match times");
  const auto kernel = LevyKernel::vladimirov(p.m, p.alpha);
  const int shells = sol.window.hi - sol.window.lo + 1;

  if (p.beta == 1.0) {
    std::vector<RadialFunction> snaps;
    for (std::size_t n = 0; n < t.size(); ++n) snaps.push_back(sol.snapshot(n));
    return master_equation_residual(kernel, t, snaps);
  }

  check_graded(t);
  const auto w = caputo_weights(t, p.beta, scheme);
  double worst = 0.0;
  for (std::size_t n = 1; n < t.size(); ++n) {
    const auto snap = sol.snapshot(n);
    for (int s = 0; s < shells; ++s) {
      const auto js = static_cast<std::size_t>(s);
      double lhs = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) lhs += w[n][k] * sol.values[k][js];
      const double rhs = apply_radial_kernel(kernel, snap, sol.window.lo + s);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

// ------------------------------------------------------------ survival asymptotics

namespace {

// sin(beta pi) Gamma(beta) / pi
double tail_constant(double beta) {
  return boost::math::sin_pi(beta) * std::tgamma(beta) / std::numbers::pi;
}

// alpha int_a^b E_beta(-w^alpha) dw, the Theta integrand after y = w^alpha.
ThetaValue theta_segment(double beta, double alpha, double a, double b) {
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double w) { return alpha * mittag_leffler(beta, -std::pow(w, alpha)); };
  ThetaValue out;
  double l1 = 0.0;
  if (b <= 1.0 || a >= 1.0) {
    if (a >= 1.0) {
      // Logarithmic variable for long slowly decaying stretches.
      auto g = [&](double u) {
        const double w = std::exp(u);
        return f(w) * w;
      };
      out.value = ts.integrate(g, std::log(a), std::log(b), 1e-13, &out.error, &l1);
    } else {
      out.value = ts.integrate(f, a, b, 1e-13, &out.error, &l1);
    }
    out.error *= std::max(1.0, l1);
    return out;
  }
  const auto lo = theta_segment(beta, alpha, a, 1.0);
  const auto hi = theta_segment(beta, alpha, 1.0, b);
  return {lo.value + hi.value, lo.error + hi.error};
}

// alpha int_{W}^inf E_beta(-w^alpha) dw from the inverse-power expansion of
// E_beta, valid once W^alpha is large.
ThetaValue theta_tail(double beta, double alpha, double W) {
  const double log_w = std::log(W);
  ThetaValue out;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 400; ++k) {
    const double g = beta * k;
    // W^{1 - alpha k} Gamma(beta k) / (alpha k - 1)
    const double envelope =
        std::exp(boost::math::lgamma(g) + (1.0 - alpha * k) * log_w) / (alpha * k - 1.0);
    if (envelope > previous) break;
    previous = envelope;
    const double term =
        (k % 2 == 1 ? 1.0 : -1.0) * alpha * envelope * boost::math::sin_pi(g) / std::numbers::pi;
    out.value += term;
    out.error = std::abs(alpha * envelope);
    if (out.error < 1e-17 * std::abs(out.value)) break;
  }
  return out;
}

}  // namespace

ThetaValue theta(double beta, double alpha, double t) {
  validate({2, alpha, beta});
  if (!(t >= 0.0)) throw DomainError(fmt::format("theta needs t >= 0, got {}", t));
  if (t == 0.0) return {};
  if (std::isinf(t)) {
    if (alpha <= 1.0 && beta < 1.0)
      throw DomainError("Theta_beta(alpha) diverges for alpha <= 1");
    const double W = std::pow(beta == 1.0 ? 60.0 : 100.0, 1.0 / alpha);
    const auto head = theta_segment(beta, alpha, 0.0, W);
    const auto tail = beta == 1.0 ? ThetaValue{} : theta_tail(beta, alpha, W);
    return {head.value + tail.value, head.error + tail.error};
  }
  return theta_segment(beta, alpha, 0.0, std::pow(t, beta / alpha));
}

SurvivalBounds survival_bounds(const FractionalParams& p, double t) {
  validate(p);
  if (!(t > 0.0)) throw DomainError("survival bounds need t > 0");
  const double scale = std::pow(t, -p.beta / p.alpha) * theta(p.beta, p.alpha, t).value /
                       (p.alpha * std::log(p.m));
  return {scale / p.m, scale * p.m};
}

SurvivalRate survival_rate(const FractionalParams& p, double t) {
  validate(p);
  if (!(t > 1.0)) throw DomainError("the survival rate is an asymptotic for t > 1");
  SurvivalRate r{};
  if (p.alpha > 1.0 || p.beta == 1.0) {
    r.branch = RateBranch::theta_limit;
    r.rate = std::pow(t, -p.beta / p.alpha) * theta(p.beta, p.alpha, INFINITY).value;
  } else if (p.alpha < 1.0) {
    r.branch = RateBranch::inverse_power;
    r.rate = p.alpha / (1.0 - p.alpha) * tail_constant(p.beta) * std::pow(t, -p.beta);
  } else {
    r.branch = RateBranch::logarithmic;
    r.rate = tail_constant(p.beta) * p.beta * std::log(t) * std::pow(t, -p.beta);
  }
  const double c = p.alpha * std::log(p.m);
  r.lower = r.rate / (c * p.m);
  r.upper = r.rate * p.m / c;
  return r;
}

const char* to_string(RateBranch b) {
  switch (b) {
    case RateBranch::theta_limit: return "theta_limit";
    case RateBranch::inverse_power: return "inverse_power";
    case RateBranch::logarithmic: return "logarithmic";
  }
  return "?";
}

}  // namespace madic
