#pragma once

// Haar measure on Q_m: balls, spheres, radial integrands and character
// integrals over balls and spheres.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "madic/core.hpp"

namespace madic {

using cplx = std::complex<double>;

/// B_r(center) = {x : |x - center|_m <= m^r}.
struct Ball {
  MadicNumber center;
  int r = 0;

  /// Throws PrecisionError when |x - center|_m cannot be resolved against m^r.
  bool contains(const MadicNumber& x) const;
};

/// mu(B_r) = m^r
double ball_measure(int m, int r);
/// mu(S_r) = m^r (1 - 1/m)
double sphere_measure(int m, int r);

/// Integral of chi(kx) over B_r: m^r if |k| <= m^{-r}, else 0.
double character_ball_integral(int m, Norm k, int r);
/// Integral of chi(kx) over the sphere S_r.
double character_sphere_integral(int m, Norm k, int r);

/// A function of |x|_m only, addressed by shell index j (|x|_m = m^j).
///
/// Either tabulated on a contiguous range of shells with a fixed rule beyond
/// each end, or given by a formula evaluated lazily.
class RadialFunction {
 public:
  /// Behaviour outside the tabulated range: zero, or hold the end value.
  enum class Tail { zero, hold };

  static RadialFunction tabulated(int m, int j_lo, std::vector<cplx> values,
                                  Tail below = Tail::zero,
                                  Tail above = Tail::zero);
  static RadialFunction formula(int m, std::function<cplx(int)> f);

  int base() const noexcept { return m_; }
  bool is_tabulated() const noexcept { return !formula_; }
  int j_lo() const noexcept { return j_lo_; }
  int j_hi() const noexcept { return j_lo_ + static_cast<int>(values_.size()) - 1; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  Tail below() const noexcept { return below_; }
  Tail above() const noexcept { return above_; }

  /// f(m^j)
  cplx operator()(int j) const;

 private:
  int m_ = 2;
  int j_lo_ = 0;
  std::vector<cplx> values_;
  Tail below_ = Tail::zero;
  Tail above_ = Tail::zero;
  std::function<cplx(int)> formula_;
};

/// A truncated shell series together with a bound on what was left out.
struct SeriesResult {
  cplx value;
  double tail_bound = 0.0;
};

/// Shell count after which a formula-defined series is cut off.
inline constexpr int kMaxShells = 200;

/// Integral of f(|x|_m) over B_r: (1 - 1/m) sum_{i <= r} m^i f(m^i).
/// Tabulated functions are summed exactly (closed-form tails); formulas are
/// summed downward from i = r until terms become negligible. Throws
/// DivergenceError when the terms do not decay.
SeriesResult integrate_radial(const RadialFunction& f, int r);

/// Integral of chi(kx) f(|x|_m) over B_r, via the closed-form shell identity.
SeriesResult radial_character_integral(const RadialFunction& f, Norm k, int r);

/// |{c x mod m^n : 0 <= x < m^n}| / m^n, found by enumerating residues.
/// Throws SizeError when m^n exceeds 2^24.
Fraction image_measure_enumerate(std::int64_t c, int m, int n);

}  // namespace madic
