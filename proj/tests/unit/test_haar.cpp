#include <doctest.h>

#include <cmath>

#include "character_oracle.hpp"
#include "madic/errors.hpp"
#include "madic/fourier.hpp"
#include "madic/haar.hpp"

using namespace madic;

TEST_SUITE("haar") {

TEST_CASE("ball and sphere measures") {
  for (int m = 2; m <= 10; ++m) CHECK(ball_measure(m, 0) == 1.0);
  CHECK(ball_measure(3, 2) == 9.0);
  CHECK(sphere_measure(3, 2) == 6.0);
  double total = ball_measure(2, -6);
  for (int j = -5; j <= 0; ++j) total += sphere_measure(2, j);
  CHECK(total == 1.0);
}

TEST_CASE("integrate_radial closed and formula cases") {
  for (int m : {2, 3, 7}) {
    const auto one = RadialFunction::tabulated(m, 0, {1.0}, RadialFunction::Tail::hold);
    CHECK(integrate_radial(one, 0).value.real() == doctest::Approx(1.0).epsilon(1e-15));
    const auto f1 = RadialFunction::formula(m, [](int) { return cplx(1.0); });
    CHECK(integrate_radial(f1, 0).value.real() == doctest::Approx(1.0).epsilon(1e-13));
  }
  const auto diverge = RadialFunction::formula(3, [](int i) { return cplx(std::pow(3.0, -i)); });
  CHECK_THROWS_AS(integrate_radial(diverge, 0), DivergenceError);

  // f(2^i) = 2^i on i <= 0, zero above: (1/2) sum_{i <= 0} 4^i = 2/3.
  const auto g = RadialFunction::formula(2, [](int i) {
    return cplx(i <= 0 ? std::pow(2.0, i) : 0.0);
  });
  const auto s = integrate_radial(g, 3);
  CHECK(s.value.real() == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(s.tail_bound < 1e-13);
}

TEST_CASE("character integrals against the digit-product oracle") {
  for (int m = 2; m <= 10; ++m) {
    for (int r = -4; r <= 4; ++r) {
      for (int kappa = -8; kappa <= 8; ++kappa) {
        const Norm k = Norm::power(kappa);
        const double ball = character_ball_integral(m, k, r);
        const double sphere = character_sphere_integral(m, k, r);
        const double scale = std::pow(m, r);
        CHECK(std::abs(ball - static_cast<double>(oracle::ball_character(m, kappa, r))) <=
              1e-15 * scale);
        CHECK(std::abs(sphere - static_cast<double>(oracle::sphere_character(m, kappa, r))) <=
              1e-15 * scale);
        CHECK(sphere == character_ball_integral(m, k, r) - character_ball_integral(m, k, r - 1));
      }
      CHECK(character_ball_integral(m, Norm::zero(), r) == std::pow(m, r));
    }
  }
  CHECK(character_ball_integral(3, Norm::power(1), 0) == 0.0);
  CHECK(character_sphere_integral(3, Norm::power(1), 0) == doctest::Approx(-1.0 / 3.0));
  CHECK(character_ball_integral(5, Norm::zero(), 2) == 25.0);
}

TEST_CASE("radial character integral against shell sums") {
  // Shell-by-shell oracle sum_j f(m^j) int_{S_j} chi(kx) dx on a table with
  // a held lower tail.
  auto shell_sum = [](int m, const RadialFunction& f, int kappa, int r) {
    long double s = 0.0L;
    for (int j = -80; j <= r; ++j) s += f(j).real() * oracle::sphere_character(m, kappa, j);
    s += f(-81).real() * oracle::ball_character(m, kappa, -81);
    return static_cast<double>(s);
  };
  for (int m : {2, 3, 5}) {
    std::vector<cplx> v;
    for (int j = -6; j <= 6; ++j) v.emplace_back(std::exp(-0.3 * j * j) + 0.1 * j);
    const auto f = RadialFunction::tabulated(m, -6, v, RadialFunction::Tail::hold);
    for (int kappa = -5; kappa <= 5; ++kappa)
      for (int r = -3; r <= 6; ++r) {
        const double got = radial_character_integral(f, Norm::power(kappa), r).value.real();
        CHECK(std::abs(got - shell_sum(m, f, kappa, r)) < 1e-12);
      }
  }
  // Vladimirov integrand on shells j >= 1, m = 3, |k| = 3.
  const auto w = RadialFunction::formula(3, [](int j) {
    return cplx(j >= 1 ? std::pow(3.0, -2.0 * j) : 0.0);
  });
  long double s = 0.0L;
  for (int j = 1; j <= 60; ++j) s += std::pow(3.0L, -2.0L * j) * oracle::sphere_character(3, 1, j);
  CHECK(radial_character_integral(w, Norm::power(1), 60).value.real() ==
        doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
  // Constant integrand with |k| > m^{-r} vanishes.
  const auto one = RadialFunction::tabulated(4, 0, {1.0}, RadialFunction::Tail::hold);
  CHECK(std::abs(radial_character_integral(one, Norm::power(2), 0).value) < 1e-15);
}

TEST_CASE("additivity of ball into spheres") {
  for (int m : {2, 3, 6}) {
    const auto f = RadialFunction::formula(m, [](int j) { return cplx(std::exp(0.2 * j)); });
    for (int r = -3; r <= 3; ++r) {
      double shells = integrate_radial(f, r - 1).value.real();
      shells += f(r).real() * sphere_measure(m, r);
      CHECK(integrate_radial(f, r).value.real() == doctest::Approx(shells).epsilon(1e-12));
    }
  }
}

TEST_CASE("translation invariance of radial integrals") {
  // int_{B_r(a)} f(|x - a|) dx only sees shells around a: compare coset sums
  // of a step function centred at two different points.
  const int m = 3;
  const auto maps = coset_index_maps(m, 2, -2);
  auto mass_around = [&](const MadicNumber& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < maps.cells; ++i) {
      const auto x = maps.representative(i) + a;
      const double d = distance(x, a);
      s += (d == 0.0 ? 2.0 : 1.0 / (1.0 + d)) * std::pow(m, -2);
    }
    return s;
  };
  const double here = mass_around(MadicNumber::zero(m));
  CHECK(mass_around(MadicNumber::from_integer(5, m)) == doctest::Approx(here).epsilon(1e-14));
  std::vector<std::uint8_t> digits(kDefaultPrecision, 0);
  digits[0] = 1;
  digits[1] = 2;
  CHECK(mass_around(MadicNumber::from_digits(m, -3, digits)) ==
        doctest::Approx(here).epsilon(1e-14));
}

TEST_CASE("convolution mass equals product of masses") {
  const int m = 3;
  std::vector<cplx> a(27), b(27);
  for (std::size_t i = 0; i < 27; ++i) {
    a[i] = double((i * 7) % 5);
    b[i] = double((i * 3) % 4) + 0.5;
  }
  const LocallyConstantFunction f(m, 1, -2, a), g(m, 2, -1, b);
  const auto h = convolve(f, g);
  CHECK(std::abs(integral(h) - integral(f) * integral(g)) < 1e-10);
}

TEST_CASE("image measures of multiplication maps") {
  for (int n : {2, 3, 4}) CHECK(image_measure_enumerate(2, 4, n) == Fraction{1, 2});
  CHECK(image_measure_enumerate(3, 4, 3) == Fraction{1, 1});
  for (int m : {2, 5, 6}) CHECK(image_measure_enumerate(1, m, 3) == Fraction{1, 1});
  // Units of norm one with image measure below one exist for composite m.
  CHECK(image_measure_enumerate(2, 6, 3).num * 1.0 / image_measure_enumerate(2, 6, 3).den < 1.0);
  // Prime m: image measure equals |c|_m.
  for (std::int64_t c = 1; c <= 30; ++c) {
    const auto f = image_measure_enumerate(c, 5, 4);
    const double norm = MadicNumber::from_integer(c, 5).pseudonorm();
    CHECK(double(f.num) / double(f.den) == doctest::Approx(norm));
  }
  CHECK_THROWS_AS(image_measure_enumerate(1, 2, 30), SizeError);
}

}  // TEST_SUITE
