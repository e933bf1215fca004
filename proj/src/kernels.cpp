#include "madic/kernels.hpp"

#include <algorithm>
#include <cstdint>

#include "madic/core.hpp"

namespace madic::kernels {

namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("kernel input and output sizes differ");
}

int digits_of(int m, std::size_t M) {
  int d = 0;
  std::size_t p = 1;
  while (p < M) {
    p *= static_cast<std::size_t>(m);
    ++d;
  }
  if (p != M) throw DomainError("transform length is not a power of the base");
  return d;
}

cplx naive_entry(std::span<const cplx> in, const std::vector<cplx>& w, std::size_t q) {
  const std::size_t M = in.size();
  cplx acc{};
  for (std::size_t n = 0; n < M; ++n) acc += w[(n * q) % M] * in[n];
  return acc;
}

// One radix-m butterfly: combines the m sub-transforms interleaved at stride
// `sub` starting at `base + k` into outputs k + u * sub.
void butterfly(int m, std::size_t L, std::size_t sub, std::size_t base, std::size_t k,
               std::size_t stride, const std::vector<cplx>& w, const std::vector<cplx>& src,
               std::vector<cplx>& dst) {
  for (int u = 0; u < m; ++u) {
    const std::size_t e = k + static_cast<std::size_t>(u) * sub;
    cplx acc{};
    for (int v = 0; v < m; ++v)
      acc += w[((static_cast<std::size_t>(v) * e) % L) * stride] *
             src[base + k + static_cast<std::size_t>(v) * sub];
    dst[base + e] = acc;
  }
}

template <bool Parallel>
void dft_radix(int m, std::span<const cplx> in, std::span<cplx> out, Sign sign) {
  check_sizes(in.size(), out.size());
  const std::size_t M = in.size();
  const int d = digits_of(m, M);
  const auto w = twiddles(M, sign);

  std::vector<cplx> a(M), b(M);
  for (std::size_t n = 0; n < M; ++n) a[digit_reverse(n, m, d)] = in[n];

  std::size_t L = 1;
  for (int s = 0; s < d; ++s) {
    const std::size_t sub = L;
    L *= static_cast<std::size_t>(m);
    const std::size_t stride = M / L;
    const auto jobs = static_cast<std::int64_t>(M / static_cast<std::size_t>(m));
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
      for (std::int64_t job = 0; job < jobs; ++job) {
        auto j = static_cast<std::size_t>(job);
        butterfly(m, L, sub, (j / sub) * L, j % sub, stride, w, a, b);
      }
    } else {
      for (std::int64_t job = 0; job < jobs; ++job) {
        auto j = static_cast<std::size_t>(job);
        butterfly(m, L, sub, (j / sub) * L, j % sub, stride, w, a, b);
      }
    }
    a.swap(b);
  }
  std::copy(a.begin(), a.end(), out.begin());
}

}  // namespace

std::vector<cplx> twiddles(std::size_t M, Sign sign) {
  std::vector<cplx> w(M);
  for (std::size_t t = 0; t < M; ++t) {
    UnitComplex phase(t, M);
    w[t] = (sign == Sign::plus ? phase : phase.conj()).value();
  }
  return w;
}

std::size_t digit_reverse(std::size_t i, int m, int digits) {
  std::size_t r = 0;
  for (int p = 0; p < digits; ++p) {
    r = r * static_cast<std::size_t>(m) + i % static_cast<std::size_t>(m);
    i /= static_cast<std::size_t>(m);
  }
  return r;
}

void dft_naive_serial(std::span<const cplx> in, std::span<cplx> out, Sign sign) {
  check_sizes(in.size(), out.size());
  const auto w = twiddles(in.size(), sign);
  for (std::size_t q = 0; q < in.size(); ++q) out[q] = naive_entry(in, w, q);
}

void dft_naive_parallel(std::span<const cplx> in, std::span<cplx> out, Sign sign) {
  check_sizes(in.size(), out.size());
  const auto w = twiddles(in.size(), sign);
  const auto M = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t q = 0; q < M; ++q)
    out[static_cast<std::size_t>(q)] = naive_entry(in, w, static_cast<std::size_t>(q));
}

void dft_radix_serial(int m, std::span<const cplx> in, std::span<cplx> out, Sign sign) {
  dft_radix<false>(m, in, out, sign);
}

void dft_radix_parallel(int m, std::span<const cplx> in, std::span<cplx> out, Sign sign) {
  dft_radix<true>(m, in, out, sign);
}

namespace {

cplx convolve_entry(std::span<const cplx> f, std::span<const cplx> g, std::size_t n) {
  const std::size_t M = f.size();
  cplx acc{};
  for (std::size_t j = 0; j < M; ++j) acc += f[j] * g[(n + M - j) % M];
  return acc;
}

void check_convolution(std::span<const cplx> f, std::span<const cplx> g,
                       std::span<cplx> out) {
  check_sizes(f.size(), g.size());
  check_sizes(f.size(), out.size());
}

}  // namespace

void cyclic_convolve_serial(std::span<const cplx> f, std::span<const cplx> g,
                            double weight, std::span<cplx> out) {
  check_convolution(f, g, out);
  for (std::size_t n = 0; n < f.size(); ++n) out[n] = weight * convolve_entry(f, g, n);
}

void cyclic_convolve_parallel(std::span<const cplx> f, std::span<const cplx> g,
                              double weight, std::span<cplx> out) {
  check_convolution(f, g, out);
  const auto M = static_cast<std::int64_t>(f.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t n = 0; n < M; ++n) {
    auto i = static_cast<std::size_t>(n);
    out[i] = weight * convolve_entry(f, g, i);
  }
}

}  // namespace madic::kernels
