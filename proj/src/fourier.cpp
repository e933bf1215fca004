#include "madic/fourier.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "madic/kernels.hpp"

namespace madic {

__extension__ typedef unsigned __int128 u128;

namespace {

std::vector<cplx> to_natural(const CosetIndexMaps& maps, const std::vector<cplx>& flat) {
  std::vector<cplx> out(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) out[maps.flat_to_natural[i]] = flat[i];
  return out;
}

std::vector<cplx> to_flat(const CosetIndexMaps& maps, const std::vector<cplx>& natural) {
  std::vector<cplx> out(natural.size());
  for (std::size_t n = 0; n < natural.size(); ++n) out[maps.natural_to_flat[n]] = natural[n];
  return out;
}

std::vector<cplx> dft(int m, const std::vector<cplx>& in, kernels::Sign sign,
                      const TransformOptions& opt) {
  std::vector<cplx> out(in.size());
  const bool par = opt.execution == Execution::parallel;
  if (opt.algorithm == Algorithm::naive) {
    par ? kernels::dft_naive_parallel(in, out, sign) : kernels::dft_naive_serial(in, out, sign);
  } else {
    par ? kernels::dft_radix_parallel(m, in, out, sign)
        : kernels::dft_radix_serial(m, in, out, sign);
  }
  return out;
}

// Smallest grid (support, constancy) on which a natural-order table still
// lives: support drops while every value off m B_{support-1} is zero,
// constancy rises while values repeat across the top digit.
struct Reduced {
  int support;
  int constancy;
  std::vector<cplx> natural;
};

Reduced reduce(int m, int support, int constancy, std::vector<cplx> natural) {
  const auto mm = static_cast<std::size_t>(m);
  bool changed = true;
  while (changed && support > constancy) {
    changed = false;
    const std::size_t M = natural.size();
    bool inner = true;
    for (std::size_t n = 0; n < M && inner; ++n)
      if (n % mm != 0 && natural[n] != cplx{}) inner = false;
    if (inner) {
      std::vector<cplx> next(M / mm);
      for (std::size_t n = 0; n < next.size(); ++n) next[n] = natural[n * mm];
      natural.swap(next);
      --support;
      changed = true;
      continue;
    }
    const std::size_t low = M / mm;
    bool flat = true;
    for (std::size_t n = low; n < M && flat; ++n)
      if (natural[n] != natural[n % low]) flat = false;
    if (flat) {
      natural.resize(low);
      ++constancy;
      changed = true;
    }
  }
  return {support, constancy, std::move(natural)};
}

// Shared body of forward and inverse: the output lives on the dual grid
// (-constancy, -support), with cell volume m^constancy on the input side.
// The DFT runs on the smallest grid carrying f and is embedded back, so
// zeros and repetitions predicted by the duality come out exact.
template <class Out, class In>
Out transform(const In& f, kernels::Sign sign, const TransformOptions& opt) {
  const int m = f.base();
  const auto in_maps = coset_index_maps(m, f.support(), f.constancy(), opt.max_cells);
  auto small = reduce(m, f.support(), f.constancy(), to_natural(in_maps, f.values()));
  const auto out_maps = coset_index_maps(m, -small.constancy, -small.support, opt.max_cells);
  auto natural = dft(m, small.natural, sign, opt);
  const double volume = mpow(m, small.constancy);
  for (auto& v : natural) v *= volume;
  Out g(m, -small.constancy, -small.support, to_flat(out_maps, natural));
  if (small.support == f.support() && small.constancy == f.constancy()) return g;
  return embed(g, -f.constancy(), -f.support(), opt.max_cells);
}

void require_same_base(const LocallyConstantFunction& f, const LocallyConstantFunction& g) {
  if (f.base() != g.base())
    throw BaseMismatch(fmt::format("base {} vs base {}", f.base(), g.base()));
}

}  // namespace

// ------------------------------------------------------------ CosetIndexMaps

CosetIndexMaps coset_index_maps(int m, int r, int l, std::size_t max_cells) {
  check_base(m);
  if (r < l) throw DomainError(fmt::format("support index {} below constancy index {}", r, l));
  const double cells = mpow(m, r - l);
  if (cells > static_cast<double>(max_cells))
    throw SizeError(fmt::format("grid of {}^{} cells exceeds the limit of {}", m, r - l,
                                max_cells));
  CosetIndexMaps maps;
  maps.m = m;
  maps.support = r;
  maps.constancy = l;
  maps.digits = r - l;
  maps.cells = static_cast<std::size_t>(cells);
  maps.flat_to_natural.resize(maps.cells);
  maps.natural_to_flat.resize(maps.cells);
  for (std::size_t i = 0; i < maps.cells; ++i) {
    const std::size_t n = kernels::digit_reverse(i, m, maps.digits);
    maps.flat_to_natural[i] = n;
    maps.natural_to_flat[n] = i;
  }
  return maps;
}

std::vector<std::uint8_t> CosetIndexMaps::tuple(std::size_t flat) const {
  std::size_t n = flat_to_natural.at(flat);
  std::vector<std::uint8_t> t(static_cast<std::size_t>(digits));
  for (auto& d : t) {
    d = static_cast<std::uint8_t>(n % static_cast<std::size_t>(m));
    n /= static_cast<std::size_t>(m);
  }
  return t;
}

std::size_t CosetIndexMaps::flat_index(const std::vector<std::uint8_t>& t) const {
  if (t.size() != static_cast<std::size_t>(digits))
    throw DomainError("digit tuple has the wrong length");
  std::size_t flat = 0;
  for (auto d : t) {
    if (d >= m) throw DomainError("digit tuple entry not below m");
    flat = flat * static_cast<std::size_t>(m) + d;
  }
  return flat;
}

MadicNumber CosetIndexMaps::representative(std::size_t flat) const {
  if (digits == 0) return MadicNumber::zero(m);
  return MadicNumber::from_digits(m, -support, tuple(flat));
}

UnitComplex CosetIndexMaps::phase(std::size_t x_flat, std::size_t k_flat) const {
  const std::size_t n = flat_to_natural.at(x_flat);
  // The dual grid has the same digit count, so its natural index uses the
  // same reversal.
  const std::size_t q = kernels::digit_reverse(k_flat, m, digits);
  const auto prod = static_cast<u128>(n) * q;
  return UnitComplex(static_cast<std::uint64_t>(prod % cells), cells);
}

// ------------------------------------------------------------ CosetFunction

template <class Domain>
CosetFunction<Domain>::CosetFunction(int m, int support, int constancy,
                                     std::vector<cplx> values)
    : m_(m), support_(support), constancy_(constancy), values_(std::move(values)) {
  check_base(m);
  if (support < constancy)
    throw DomainError(fmt::format("support index {} below constancy index {}", support,
                                  constancy));
  if (mpow(m, support - constancy) != static_cast<double>(values_.size()))
    throw DomainError(fmt::format("expected {}^{} values, got {}", m, support - constancy,
                                  values_.size()));
}

template <class Domain>
CosetFunction<Domain> CosetFunction<Domain>::zeros(int m, int support, int constancy) {
  check_base(m);
  if (support < constancy) throw DomainError("support index below constancy index");
  const double cells = mpow(m, support - constancy);
  if (cells > static_cast<double>(kDefaultMaxCells)) throw SizeError("grid too large");
  return CosetFunction(m, support, constancy,
                       std::vector<cplx>(static_cast<std::size_t>(cells)));
}

template <class Domain>
cplx CosetFunction<Domain>::at(const MadicNumber& x) const {
  if (x.base() != m_) throw BaseMismatch("point and function have different bases");
  if (!x.norm().at_most(support_)) return {};
  std::size_t flat = 0;
  for (int p = -support_; p < -constancy_; ++p)
    flat = flat * static_cast<std::size_t>(m_) + static_cast<std::size_t>(x.digit(p));
  return values_[flat];
}

template class CosetFunction<SpatialDomain>;
template class CosetFunction<FrequencyDomain>;

// ------------------------------------------------------------ transforms

SpectralFunction forward(const LocallyConstantFunction& f, const TransformOptions& opt) {
  return transform<SpectralFunction>(f, kernels::Sign::plus, opt);
}

LocallyConstantFunction inverse(const SpectralFunction& g, const TransformOptions& opt) {
  return transform<LocallyConstantFunction>(g, kernels::Sign::minus, opt);
}

template <class Domain>
CosetFunction<Domain> embed(const CosetFunction<Domain>& f, int support, int constancy,
                            std::size_t max_cells) {
  if (support < f.support() || constancy > f.constancy())
    throw DomainError(fmt::format("cannot embed D_{}^{} into D_{}^{}", f.support(),
                                  f.constancy(), support, constancy));
  const int m = f.base();
  const auto maps = coset_index_maps(m, support, constancy, max_cells);
  const auto old_maps = coset_index_maps(m, f.support(), f.constancy(), max_cells);
  const auto drop = static_cast<std::size_t>(mpow(m, support - f.support()));
  const std::size_t old_cells = old_maps.cells;

  std::vector<cplx> out(maps.cells);
  for (std::size_t i = 0; i < maps.cells; ++i) {
    const std::size_t n = maps.flat_to_natural[i];
    // Digits below -f.support() must vanish for the point to lie in B_support(f).
    if (n % drop != 0) continue;
    const std::size_t old_n = (n / drop) % old_cells;
    out[i] = f[old_maps.natural_to_flat[old_n]];
  }
  return CosetFunction<Domain>(m, support, constancy, std::move(out));
}

template LocallyConstantFunction embed(const LocallyConstantFunction&, int, int, std::size_t);
template SpectralFunction embed(const SpectralFunction&, int, int, std::size_t);

LocallyConstantFunction convolve(const LocallyConstantFunction& f,
                                 const LocallyConstantFunction& g,
                                 const TransformOptions& opt) {
  require_same_base(f, g);
  const int r = std::max(f.support(), g.support());
  const int l = std::min(f.constancy(), g.constancy());
  const auto fe = embed(f, r, l, opt.max_cells);
  const auto ge = embed(g, r, l, opt.max_cells);
  const auto maps = coset_index_maps(f.base(), r, l, opt.max_cells);
  const auto fn = to_natural(maps, fe.values());
  const auto gn = to_natural(maps, ge.values());
  std::vector<cplx> hn(maps.cells);
  const double volume = mpow(f.base(), l);
  if (opt.execution == Execution::parallel)
    kernels::cyclic_convolve_parallel(fn, gn, volume, hn);
  else
    kernels::cyclic_convolve_serial(fn, gn, volume, hn);
  return LocallyConstantFunction(f.base(), r, l, to_flat(maps, hn));
}

LocallyConstantFunction convolve_spectral(const LocallyConstantFunction& f,
                                          const LocallyConstantFunction& g,
                                          const TransformOptions& opt) {
  require_same_base(f, g);
  const int r = std::max(f.support(), g.support());
  const int l = std::min(f.constancy(), g.constancy());
  auto ft = forward(embed(f, r, l, opt.max_cells), opt);
  const auto gt = forward(embed(g, r, l, opt.max_cells), opt);
  for (std::size_t i = 0; i < ft.size(); ++i) ft.values()[i] *= gt[i];
  return inverse(ft, opt);
}

cplx integral(const LocallyConstantFunction& f) {
  cplx sum{};
  for (const auto& v : f.values()) sum += v;
  return sum * mpow(f.base(), f.constancy());
}

}  // namespace madic
