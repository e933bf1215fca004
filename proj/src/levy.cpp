#include "madic/levy.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace madic {

double gamma_m(int m, double alpha) {
  check_base(m);
  if (!(alpha > 0.0))
    throw DomainError(fmt::format("Gamma_m(-alpha) needs alpha > 0, got {}", alpha));
  return (1.0 - std::pow(m, -alpha - 1.0)) / (1.0 - std::pow(m, alpha));
}

LevyKernel LevyKernel::vladimirov(int m, double alpha) {
  LevyKernel k;
  k.m_ = m;
  k.vladimirov_ = true;
  k.alpha_ = alpha;
  k.scale_ = -1.0 / gamma_m(m, alpha);
  return k;
}

LevyKernel LevyKernel::tabulated(int m, int j_lo, std::vector<double> weights) {
  check_base(m);
  if (weights.empty()) throw DomainError("kernel needs at least one shell weight");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw DomainError("kernel weights must be finite and nonnegative");
  LevyKernel k;
  k.m_ = m;
  k.j_lo_ = j_lo;
  k.weights_ = std::move(weights);
  return k;
}

double LevyKernel::weight(int j) const {
  if (vladimirov_) return scale_ * std::pow(m_, -j * (alpha_ + 1.0));
  if (j < j_lo_ || j > j_hi()) return 0.0;
  return weights_[static_cast<std::size_t>(j - j_lo_)];
}

double LevyKernel::tail_mass(int J) const {
  if (vladimirov_) {
    // C (1 - 1/m) sum_{j > J} m^{-j alpha}
    const double q = std::pow(m_, -alpha_);
    return scale_ * (1.0 - 1.0 / m_) * std::pow(m_, -(J + 1) * alpha_) / (1.0 - q);
  }
  double sum = 0.0;
  for (int j = std::max(J + 1, j_lo_); j <= j_hi(); ++j) sum += weights_[static_cast<std::size_t>(j - j_lo_)] * sphere_measure(m_, j);
  return sum;
}

SymbolValue levy_symbol(const LevyKernel& kernel, Norm k, int shells) {
  if (k.is_zero()) return {};
  const int m = kernel.base();
  const int first = 1 - k.exponent();
  // On shell 1 - kappa the character averages to -m^{-kappa}; above it the
  // character integrates to zero and only -mu(S_j) survives.
  double sum = -kernel.weight(first) * mpow(m, first);
  int last = first + shells;
  if (!kernel.is_vladimirov()) last = std::max(first, std::min(last, kernel.j_hi()));
  for (int j = first + 1; j <= last; ++j) sum -= kernel.weight(j) * sphere_measure(m, j);
  const double tail = kernel.tail_mass(last);
  return {cplx(sum - tail, 0.0), tail};
}

cplx levy_symbol_general(const LocallyConstantFunction& kernel, const MadicNumber& k) {
  if (k.base() != kernel.base()) throw BaseMismatch("kernel and frequency bases differ");
  if (k.is_exact_zero()) return {};
  const auto maps = coset_index_maps(kernel.base(), kernel.support(), kernel.constancy());
  cplx sum{};
  for (std::size_t i = 0; i < maps.cells; ++i) {
    if (maps.flat_to_natural[i] == 0) continue;
    const UnitComplex phase = character(k, maps.representative(i));
    sum += (phase.value() - 1.0) * kernel[i];
  }
  return sum * mpow(kernel.base(), kernel.constancy());
}

cplx characteristic_at(const LevyCharacteristic& c, const MadicNumber& k, double t) {
  if (!(t >= 0.0)) throw DomainError(fmt::format("time must be nonnegative, got {}", t));
  if (t == 0.0) return {1.0, 0.0};
  if (c.ball && !k.norm().at_most(*c.ball)) return {};
  cplx value = std::exp(t * levy_symbol(c.kernel, k.norm()).value);
  if (!c.drift.is_exact_zero()) value *= character(k, c.drift).value();
  return value;
}

double apply_radial_kernel(const LevyKernel& kernel, const RadialFunction& u, int i) {
  if (!u.is_tabulated()) throw DomainError("radial kernel needs a tabulated function");
  if (u.base() != kernel.base()) throw BaseMismatch("kernel and function bases differ");
  const int m = u.base();
  const double ui = u(i).real();
  // Jumps within the own shell land either in the same shell (no change) or
  // inside B_{i-1}. Summing differences u_k - u_i rather than subtracting
  // m^{i-1} u_i from the ball integral avoids cancellation under the large
  // inner weights.
  double inner = 0.0;
  const int lo = u.j_lo();
  const int top = std::min(i - 1, lo - 1);  // B_top lies below the table
  for (int k = lo; k <= i - 1; ++k) inner += sphere_measure(m, k) * (u(k).real() - ui);
  inner += mpow(m, top) * (u(top).real() - ui);
  double sum = kernel.weight(i) * inner;
  const int J = std::max(i, u.j_hi());
  for (int j = i + 1; j <= J; ++j)
    sum += kernel.weight(j) * sphere_measure(m, j) * (u(j).real() - ui);
  sum += (u(J + 1).real() - ui) * kernel.tail_mass(J);
  return sum;
}

double master_equation_residual(const LevyKernel& kernel, const std::vector<double>& times,
                                const std::vector<RadialFunction>& snapshots, int eval_lo,
                                int eval_hi) {
  if (times.size() != snapshots.size())
    throw DomainError("one snapshot per time is required");
  if (times.size() < 3)
    throw DomainError("time grid too coarse: at least three times are needed");
  for (std::size_t n = 1; n < times.size(); ++n)
    if (!(times[n] > times[n - 1])) throw DomainError("times must be strictly increasing");
  const auto& ref = snapshots.front();
  for (const auto& s : snapshots)
    if (!s.is_tabulated() || s.j_lo() != ref.j_lo() || s.j_hi() != ref.j_hi())
      throw DomainError("snapshots must share one tabulated shell window");
  const int lo = std::max(eval_lo, ref.j_lo());
  const int hi = std::min(eval_hi, ref.j_hi());
  if (lo > hi) throw DomainError("evaluation shells outside the tabulated window");

  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < times.size(); ++n) {
    const double h1 = times[n] - times[n - 1];
    const double h2 = times[n + 1] - times[n];
    const double a = -h2 / (h1 * (h1 + h2));
    const double b = (h2 - h1) / (h1 * h2);
    const double c = h1 / (h2 * (h1 + h2));
    for (int j = lo; j <= hi; ++j) {
      const double dudt = a * snapshots[n - 1](j).real() + b * snapshots[n](j).real() +
                          c * snapshots[n + 1](j).real();
      worst = std::max(worst, std::abs(dudt - apply_radial_kernel(kernel, snapshots[n], j)));
    }
  }
  return worst;
}

}  // namespace madic
