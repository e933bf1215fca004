#pragma once

// Dense kernels behind the coset-grid Fourier transform: discrete Fourier
// transforms and cyclic convolution on Z/M. Every kernel has a serial
// reference and an OpenMP version; the parallel versions split work over
// output entries only, so each entry is summed in the same order and the
// results are bit-identical.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace madic::kernels {

using cplx = std::complex<double>;

enum class Sign { plus, minus };

/// exp(+-2 pi i t / M) for t in [0, M), from exact rational angles.
std::vector<cplx> twiddles(std::size_t M, Sign sign);

/// Reverses the order of the `digits` base-m digits of i.
std::size_t digit_reverse(std::size_t i, int m, int digits);

/// out[q] = sum_n exp(+-2 pi i n q / M) in[n], O(M^2).
void dft_naive_serial(std::span<const cplx> in, std::span<cplx> out, Sign sign);
void dft_naive_parallel(std::span<const cplx> in, std::span<cplx> out, Sign sign);

/// Same transform for M = m^d by radix-m decimation in time, O(M d m).
void dft_radix_serial(int m, std::span<const cplx> in, std::span<cplx> out, Sign sign);
void dft_radix_parallel(int m, std::span<const cplx> in, std::span<cplx> out, Sign sign);

/// out[n] = weight * sum_j f[j] g[(n - j) mod M], O(M^2).
void cyclic_convolve_serial(std::span<const cplx> f, std::span<const cplx> g,
                            double weight, std::span<cplx> out);
void cyclic_convolve_parallel(std::span<const cplx> f, std::span<const cplx> g,
                              double weight, std::span<cplx> out);

}  // namespace madic::kernels
