#include "madic/mittag_leffler.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <fmt/format.h>

#include "madic/errors.hpp"

namespace madic {

namespace {

constexpr double kSeriesLimit = 1.0;
constexpr double kAsymptoticStart = 20.0;

void check_order(double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError(fmt::format("Mittag-Leffler order must lie in (0, 1], got {}", beta));
}

// sum_{n >= first} (-y)^n / Gamma(beta n + 1) for y <= 1.
double taylor_tail(double beta, double y, int first) {
  double sum = 0.0;
  double power = std::pow(-y, first);
  for (int n = first; n < 400; ++n) {
    const double term = power / std::tgamma(beta * n + 1.0);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) || term == 0.0) break;
    power *= -y;
  }
  return sum;
}

// Optimally truncated inverse-power expansion
//   E_beta(-y) ~ sum_{k >= 1} (-1)^{k+1} y^{-k} / Gamma(1 - beta k),
// with 1 / Gamma(1 - beta k) = Gamma(beta k) sin(pi beta k) / pi. Succeeds
// only if the envelope Gamma(beta k) y^{-k} falls below 1e-17 of the sum
// before it starts growing.
bool asymptotic(double beta, double y, double& out) {
  const double log_y = std::log(y);
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 400; ++k) {
    const double g = beta * k;
    const double envelope = std::exp(boost::math::lgamma(g) - k * log_y);
    if (envelope > previous) return false;
    previous = envelope;
    const double s = boost::math::sin_pi(g);
    const double term = (k % 2 == 1 ? 1.0 : -1.0) * envelope * s / std::numbers::pi;
    sum += term;
    if (sum != 0.0 && envelope < 1e-17 * std::abs(sum)) {
      out = sum;
      return true;
    }
  }
  return false;
}

// E_beta(-y) = sin(beta pi) / (beta pi) * s * int_0^inf exp(-v^{1/beta})
//              / (s^2 v^2 + 2 s v cos(beta pi) + 1) dv,   s = 1/y.
// The near-singular denominator sits around v ~ y, so the range is split
// there.
double integral(double beta, double y) {
  thread_local boost::math::quadrature::tanh_sinh<double> near;
  thread_local boost::math::quadrature::exp_sinh<double> far;
  const double s = 1.0 / y;
  const double c = std::cos(beta * std::numbers::pi);
  auto f = [&](double v) {
    const double sv = s * v;
    return std::exp(-std::pow(v, 1.0 / beta)) / (sv * sv + 2.0 * sv * c + 1.0);
  };
  const double split = std::min(y, std::pow(750.0, beta));
  const double tol = 1e-15;
  double inner = near.integrate(f, 0.0, split, tol);
  double outer = far.integrate(f, split, std::numeric_limits<double>::infinity(), tol);
  return boost::math::sin_pi(beta) / (beta * std::numbers::pi) * s * (inner + outer);
}

}  // namespace

MittagLefflerMethod mittag_leffler_method(double beta, double y) {
  check_order(beta);
  if (y == 0.0 || beta == 1.0) return MittagLefflerMethod::exact;
  if (y <= kSeriesLimit) return MittagLefflerMethod::series;
  double unused = 0.0;
  if (y >= kAsymptoticStart && asymptotic(beta, y, unused))
    return MittagLefflerMethod::asymptotic;
  return MittagLefflerMethod::integral;
}

double mittag_leffler(double beta, double z) {
  check_order(beta);
  if (!(z <= 0.0))
    throw DomainError(fmt::format("Mittag-Leffler argument must be <= 0, got {}", z));
  const double y = -z;
  if (y == 0.0) return 1.0;
  if (beta == 1.0) return std::exp(-y);
  if (std::isinf(y)) return 0.0;
  if (y <= kSeriesLimit) return taylor_tail(beta, y, 0);
  double value = 0.0;
  if (y >= kAsymptoticStart && asymptotic(beta, y, value)) return value;
  return integral(beta, y);
}

double mittag_leffler_complement(double beta, double y) {
  check_order(beta);
  if (!(y >= 0.0))
    throw DomainError(fmt::format("complement needs y >= 0, got {}", y));
  if (y == 0.0) return 0.0;
  if (beta == 1.0) return -std::expm1(-y);
  if (y <= kSeriesLimit) return -taylor_tail(beta, y, 1);
  return 1.0 - mittag_leffler(beta, -y);
}

}  // namespace madic
