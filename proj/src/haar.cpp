#include "madic/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace madic {

bool Ball::contains(const MadicNumber& x) const {
  MadicNumber d = subtract(x, center);
  if (d.is_exact_zero()) return true;
  if (!d.is_zero()) return -d.valuation() <= r;
  // d is known only to lie in m^A Z_m.
  if (d.absolute_precision() >= -r) return true;
  throw PrecisionError(fmt::format(
      "distance to center known only up to m^{}, ball radius m^{}",
      -d.absolute_precision(), r));
}

double ball_measure(int m, int r) {
  check_base(m);
  return mpow(m, r);
}

double sphere_measure(int m, int r) {
  check_base(m);
  return mpow(m, r) - mpow(m, r - 1);
}

double character_ball_integral(int m, Norm k, int r) {
  check_base(m);
  return k.at_most(-r) ? mpow(m, r) : 0.0;
}

double character_sphere_integral(int m, Norm k, int r) {
  check_base(m);
  if (k.at_most(-r)) return sphere_measure(m, r);
  if (k.exponent() == 1 - r) return -mpow(m, r - 1);
  return 0.0;
}

RadialFunction RadialFunction::tabulated(int m, int j_lo, std::vector<cplx> values,
                                         Tail below, Tail above) {
  check_base(m);
  if (values.empty()) throw DomainError("tabulated radial function needs values");
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("radial function value is not finite");
  RadialFunction f;
  f.m_ = m;
  f.j_lo_ = j_lo;
  f.values_ = std::move(values);
  f.below_ = below;
  f.above_ = above;
  return f;
}

RadialFunction RadialFunction::formula(int m, std::function<cplx(int)> fn) {
  check_base(m);
  if (!fn) throw DomainError("empty radial formula");
  RadialFunction f;
  f.m_ = m;
  f.formula_ = std::move(fn);
  return f;
}

cplx RadialFunction::operator()(int j) const {
  if (formula_) return formula_(j);
  if (j < j_lo_) return below_ == Tail::hold ? values_.front() : cplx{};
  if (j > j_hi()) return above_ == Tail::hold ? values_.back() : cplx{};
  return values_[static_cast<std::size_t>(j - j_lo_)];
}

namespace {

SeriesResult integrate_tabulated(const RadialFunction& f, int r) {
  const int m = f.base();
  cplx sum{};
  // (1 - 1/m) sum_{i <= K} m^i = m^K
  if (f.below() == RadialFunction::Tail::hold)
    sum += f.values().front() * mpow(m, std::min(r, f.j_lo() - 1));
  for (int i = f.j_lo(); i <= std::min(r, f.j_hi()); ++i)
    sum += sphere_measure(m, i) * f(i);
  if (f.above() == RadialFunction::Tail::hold && r > f.j_hi())
    sum += f.values().back() * (mpow(m, r) - mpow(m, f.j_hi()));
  return {sum, 0.0};
}

SeriesResult integrate_formula(const RadialFunction& f, int r) {
  const int m = f.base();
  cplx sum{};
  double prev = 0.0;
  double ratio = -1.0;  // unknown until two consecutive nonzero terms
  double last = 0.0;
  for (int n = 0; n < kMaxShells; ++n) {
    const int i = r - n;
    const cplx term = sphere_measure(m, i) * f(i);
    if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
      throw DivergenceError(fmt::format("radial integrand not finite on shell {}", i));
    sum += term;
    last = std::abs(term);
    if (prev > 0.0 && last > 0.0) ratio = last / prev;
    if (last > 0.0) prev = last;
    if (sum != cplx{} && last < 1e-15 * std::abs(sum)) break;
  }
  if (last == 0.0) return {sum, 0.0};
  if (ratio < 0.0 || ratio >= 1.0)
    throw DivergenceError(fmt::format(
        "shell terms do not decay below shell {} (ratio {:.3g})", r, ratio));
  return {sum, last * ratio / (1.0 - ratio)};
}

}  // namespace

SeriesResult integrate_radial(const RadialFunction& f, int r) {
  return f.is_tabulated() ? integrate_tabulated(f, r) : integrate_formula(f, r);
}

SeriesResult radial_character_integral(const RadialFunction& f, Norm k, int r) {
  if (k.at_most(-r)) return integrate_radial(f, r);
  // Only shells j <= -kappa see a constant character; shell 1 - kappa
  // averages it to -m^{-kappa}; the others cancel.
  const int kappa = k.exponent();
  SeriesResult inner = integrate_radial(f, -kappa);
  inner.value -= mpow(f.base(), -kappa) * f(1 - kappa);
  return inner;
}

Fraction image_measure_enumerate(std::int64_t c, int m, int n) {
  check_base(m);
  if (n < 0) throw DomainError("resolution n must be nonnegative");
  const double size = mpow(m, n);
  if (size > double(1 << 24))
    throw SizeError(fmt::format("{}^{} residues exceed the enumeration limit", m, n));
  const auto mod = static_cast<std::int64_t>(size);
  const std::int64_t cm = ((c % mod) + mod) % mod;
  std::vector<bool> hit(static_cast<std::size_t>(mod), false);
  std::uint64_t count = 0;
  for (std::int64_t x = 0; x < mod; ++x) {
    auto y = static_cast<std::size_t>((cm * x) % mod);
    if (!hit[y]) {
      hit[y] = true;
      ++count;
    }
  }
  const auto den = static_cast<std::uint64_t>(mod);
  const std::uint64_t g = std::gcd(count, den);
  return {count / g, den / g};
}

}  // namespace madic
