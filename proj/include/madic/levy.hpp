#pragma once

// Levy-Khinchine symbols of radial jump kernels on Q_m, the characteristic
// function exp(t psi(k)), and a residual check of the Kolmogorov-Feller
// master equation for radial densities.

#include <complex>
#include <optional>
#include <limits>
#include <vector>

#include "madic/core.hpp"
#include "madic/fourier.hpp"
#include "madic/haar.hpp"

namespace madic {

/// Gamma_m(-alpha) = (1 - m^{-alpha-1}) / (1 - m^alpha). Requires alpha > 0.
double gamma_m(int m, double alpha);

/// Radial jump density W(|x|_m), stored as one weight per shell.
class LevyKernel {
 public:
  /// W(x) = -|x|^{-alpha-1} / Gamma_m(-alpha); its symbol is -|k|^alpha.
  static LevyKernel vladimirov(int m, double alpha);
  /// W_j = weights[j - j_lo] on shells j_lo.., zero elsewhere.
  static LevyKernel tabulated(int m, int j_lo, std::vector<double> weights);

  int base() const noexcept { return m_; }
  bool is_vladimirov() const noexcept { return vladimirov_; }
  double alpha() const noexcept { return alpha_; }
  int j_lo() const noexcept { return j_lo_; }
  int j_hi() const noexcept { return j_lo_ + static_cast<int>(weights_.size()) - 1; }

  /// W on the shell |x|_m = m^j.
  double weight(int j) const;
  /// sum_{j > J} W_j mu(S_j), the jump intensity to distances beyond m^J.
  double tail_mass(int J) const;

 private:
  int m_ = 2;
  bool vladimirov_ = false;
  double alpha_ = 0.0;
  double scale_ = 0.0;
  int j_lo_ = 0;
  std::vector<double> weights_;
};

/// psi(k) with the size of the part of the sum taken in closed form.
struct SymbolValue {
  cplx value;
  double remainder = 0.0;
};

inline constexpr int kSymbolShells = 60;

/// psi(k) = int (chi(kx) - 1) W(x) dx for a radial kernel. Shells inside
/// |x| <= m^{-kappa} (|k| = m^kappa) contribute nothing; the next `shells`
/// shells are summed explicitly and the rest is added in closed form.
SymbolValue levy_symbol(const LevyKernel& kernel, Norm k, int shells = kSymbolShells);

/// psi(k) for a kernel given on a coset grid, not necessarily radial. The
/// cell containing the origin is left out.
cplx levy_symbol_general(const LocallyConstantFunction& kernel, const MadicNumber& k);

/// chi(k x0) Omega(|k|_m <= m^r) exp(t psi(k)); the ball factor is dropped
/// when no ball index is given.
struct LevyCharacteristic {
  MadicNumber drift;
  std::optional<int> ball;
  LevyKernel kernel;
};

/// Value of the characteristic function at time t; 1 at t = 0.
cplx characteristic_at(const LevyCharacteristic& c, const MadicNumber& k, double t);

/// (L u)(x) = int W(y - x) (u(y) - u(x)) dy at |x|_m = m^i for a radial u
/// tabulated on a shell window.
double apply_radial_kernel(const LevyKernel& kernel, const RadialFunction& u, int i);

/// max over interior times and tabulated shells of |du/dt - L u|, with du/dt
/// from three-point differences on the (possibly nonuniform) time grid.
/// Every snapshot must be tabulated on the same shell window. Shells outside
/// [eval_lo, eval_hi] are used by the operator but not scored; the innermost
/// tabulated shells see a held inner tail and are only exact for profiles
/// that are flat there.
double master_equation_residual(const LevyKernel& kernel, const std::vector<double>& times,
                                const std::vector<RadialFunction>& snapshots,
                                int eval_lo = std::numeric_limits<int>::min(),
                                int eval_hi = std::numeric_limits<int>::max());

}  // namespace madic
