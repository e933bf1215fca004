#pragma once

// Fourier analysis on D_r^l(Q_m): functions supported in B_r and constant on
// cosets of B_l. The quotient B_r / B_l is cyclic of order M = m^{r-l}, so
// the transform reduces to a length-M DFT after reordering coset digits.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "madic/core.hpp"

namespace madic {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultMaxCells = std::size_t{1} << 20;

/// Bijections between flat indices and coset representatives of B_s / B_c.
///
/// Flat index i enumerates digit tuples (a_{-s}, ..., a_{-c-1}) in
/// lexicographic order, a_{-s} most significant. The natural index
/// n = sum_p a_{-s+p} m^p gives the representative x = m^{-s} n, and the
/// pairing with a representative k = m^c q of the dual grid is
/// chi(kx) = exp(2 pi i n q / M).
struct CosetIndexMaps {
  int m = 2;
  int support = 0;
  int constancy = 0;
  int digits = 0;
  std::size_t cells = 1;
  std::vector<std::size_t> flat_to_natural;
  std::vector<std::size_t> natural_to_flat;

  /// Digit tuple of a flat index, lowest position first.
  std::vector<std::uint8_t> tuple(std::size_t flat) const;
  std::size_t flat_index(const std::vector<std::uint8_t>& tuple) const;
  /// Coset representative x_i = m^{-s} n_i as a MadicNumber.
  MadicNumber representative(std::size_t flat) const;
  /// chi(k_j x_i) for x_i on this grid and k_j on the dual grid, exactly.
  UnitComplex phase(std::size_t x_flat, std::size_t k_flat) const;
};

/// Throws DomainError if r < l, SizeError if m^{r-l} exceeds max_cells.
CosetIndexMaps coset_index_maps(int m, int r, int l,
                                std::size_t max_cells = kDefaultMaxCells);

struct SpatialDomain {};
struct FrequencyDomain {};

/// Values on the cosets of B_constancy inside B_support, in flat order.
template <class Domain>
class CosetFunction {
 public:
  CosetFunction(int m, int support, int constancy, std::vector<cplx> values);
  static CosetFunction zeros(int m, int support, int constancy);

  int base() const noexcept { return m_; }
  int support() const noexcept { return support_; }
  int constancy() const noexcept { return constancy_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<cplx>& values() const noexcept { return values_; }
  std::vector<cplx>& values() noexcept { return values_; }
  cplx operator[](std::size_t flat) const { return values_[flat]; }

  /// Value at a point; zero outside B_support.
  cplx at(const MadicNumber& x) const;

 private:
  int m_;
  int support_;
  int constancy_;
  std::vector<cplx> values_;
};

using LocallyConstantFunction = CosetFunction<SpatialDomain>;
using SpectralFunction = CosetFunction<FrequencyDomain>;

enum class Algorithm { naive, fast };
enum class Execution { serial, parallel };

struct TransformOptions {
  Algorithm algorithm = Algorithm::fast;
  Execution execution = Execution::parallel;
  std::size_t max_cells = kDefaultMaxCells;
};

/// f~(k) = int chi(kx) f(x) dx. Maps D_r^l to D_{-l}^{-r}.
SpectralFunction forward(const LocallyConstantFunction& f, const TransformOptions& opt = {});
/// f(x) = int chi(-kx) g(k) dk. Maps D_s^c back to D_{-c}^{-s}.
LocallyConstantFunction inverse(const SpectralFunction& g, const TransformOptions& opt = {});

/// Re-expresses f on the finer grid (support, constancy); requires
/// support >= f.support() and constancy <= f.constancy().
template <class Domain>
CosetFunction<Domain> embed(const CosetFunction<Domain>& f, int support, int constancy,
                            std::size_t max_cells = kDefaultMaxCells);

/// (f * g)(x) = int f(y) g(x - y) dy by direct coset summation on the
/// smallest common grid.
LocallyConstantFunction convolve(const LocallyConstantFunction& f,
                                 const LocallyConstantFunction& g,
                                 const TransformOptions& opt = {});
/// Same convolution computed as inverse(forward(f) forward(g)).
LocallyConstantFunction convolve_spectral(const LocallyConstantFunction& f,
                                          const LocallyConstantFunction& g,
                                          const TransformOptions& opt = {});

/// int f(x) dx = m^l sum of values.
cplx integral(const LocallyConstantFunction& f);

}  // namespace madic
