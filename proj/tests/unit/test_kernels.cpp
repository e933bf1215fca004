#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "madic/kernels.hpp"

using namespace madic::kernels;

namespace {

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(u(rng), u(rng));
  return v;
}

// Long-double double sum with angles reduced exactly in integers.
std::vector<std::complex<long double>> reference_dft(const std::vector<cplx>& in, int sign) {
  const std::size_t M = in.size();
  std::vector<std::complex<long double>> out(M);
  for (std::size_t q = 0; q < M; ++q) {
    std::complex<long double> acc = 0.0L;
    for (std::size_t n = 0; n < M; ++n) {
      const long double angle =
          sign * 2.0L * std::numbers::pi_v<long double> * ((n * q) % M) / M;
      acc += std::complex<long double>(in[n]) *
             std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    out[q] = acc;
  }
  return out;
}

std::size_t ipow(int m, int d) {
  std::size_t r = 1;
  for (int i = 0; i < d; ++i) r *= static_cast<std::size_t>(m);
  return r;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("digit reversal is an involution") {
  for (int m : {2, 3, 6}) {
    const int d = 5;
    for (std::size_t i = 0; i < ipow(m, d); ++i)
      CHECK(digit_reverse(digit_reverse(i, m, d), m, d) == i);
  }
  CHECK(digit_reverse(1, 3, 3) == 9);
}

TEST_CASE("twiddles are exact at quarter turns") {
  const auto w = twiddles(8, Sign::plus);
  CHECK(w[0] == cplx(1.0, 0.0));
  CHECK(w[2] == cplx(0.0, 1.0));
  CHECK(w[4] == cplx(-1.0, 0.0));
  CHECK(w[6] == cplx(0.0, -1.0));
}

TEST_CASE("naive and radix transforms match a long-double double sum") {
  for (int m : {2, 3, 5, 6}) {
    for (int d = 0; d <= (m <= 3 ? 7 : 4); ++d) {
      const std::size_t M = ipow(m, d);
      const auto in = random_vector(M, static_cast<unsigned>(m * 100 + d));
      for (int sign : {1, -1}) {
        const Sign s = sign > 0 ? Sign::plus : Sign::minus;
        const auto ref = reference_dft(in, sign);
        std::vector<cplx> naive(M), radix(M);
        dft_naive_serial(in, naive, s);
        dft_radix_serial(m, in, radix, s);
        double worst_naive = 0.0, worst_radix = 0.0;
        for (std::size_t q = 0; q < M; ++q) {
          worst_naive = std::max(worst_naive, double(std::abs(std::complex<long double>(naive[q]) - ref[q])));
          worst_radix = std::max(worst_radix, double(std::abs(std::complex<long double>(radix[q]) - ref[q])));
        }
        CHECK(worst_naive < 1e-11);
        CHECK(worst_radix < 1e-11);
      }
    }
  }
}

TEST_CASE("parallel kernels are bit-identical to serial ones") {
  const int m = 3, d = 7;
  const std::size_t M = ipow(m, d);
  const auto in = random_vector(M, 7);
  std::vector<cplx> a(M), b(M);
  dft_radix_serial(m, in, a, Sign::plus);
  dft_radix_parallel(m, in, b, Sign::plus);
  CHECK(a == b);
  const auto small = random_vector(ipow(3, 5), 8);
  std::vector<cplx> c(small.size()), e(small.size());
  dft_naive_serial(small, c, Sign::minus);
  dft_naive_parallel(small, e, Sign::minus);
  CHECK(c == e);
  const auto g = random_vector(small.size(), 9);
  cyclic_convolve_serial(small, g, 0.5, c);
  cyclic_convolve_parallel(small, g, 0.5, e);
  CHECK(c == e);
}

TEST_CASE("cyclic convolution matches the definition") {
  const auto f = random_vector(12, 1), g = random_vector(12, 2);
  std::vector<cplx> out(12);
  cyclic_convolve_serial(f, g, 2.0, out);
  for (std::size_t n = 0; n < 12; ++n) {
    cplx acc{};
    for (std::size_t j = 0; j < 12; ++j) acc += f[j] * g[(n + 12 - j) % 12];
    CHECK(std::abs(out[n] - 2.0 * acc) < 1e-13);
  }
}

TEST_CASE("size mismatches are rejected") {
  std::vector<cplx> a(4), b(5);
  CHECK_THROWS(dft_naive_serial(a, b, Sign::plus));
  CHECK_THROWS(dft_radix_serial(2, b, b, Sign::plus));
}

}  // TEST_SUITE
