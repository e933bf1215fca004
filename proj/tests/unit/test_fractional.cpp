#include <doctest.h>

#include <cmath>
#include <numbers>

#include "madic/errors.hpp"
#include "madic/fractional.hpp"
#include "madic/haar.hpp"
#include "madic/mittag_leffler.hpp"

using namespace madic;

namespace {

// u(x, t) = int_{B_r} chi(kx) E_beta(-|k|^alpha t^beta) dk with |x| = m^j;
// r = 0 for the unit-ball start, r large for the point source.
double fourier_route(const FractionalParams& p, int j, double t, int r) {
  const auto f = RadialFunction::formula(p.m, [&](int i) {
    return cplx(mittag_leffler(p.beta, -std::pow(p.m, i * p.alpha) * std::pow(t, p.beta)));
  });
  return radial_character_integral(f, Norm::power(j), r).value.real();
}

}  // namespace

TEST_SUITE("fractional") {

TEST_CASE("probability mass is conserved") {
  for (const FractionalParams p : {FractionalParams{3, 1.0, 0.5}, FractionalParams{2, 0.7, 0.9},
                                   FractionalParams{5, 2.0, 1.0}}) {
    for (auto ic : {InitialCondition::delta, InitialCondition::unit_ball}) {
      for (double t : {0.1, 1.0, 10.0}) {
        const auto w = auto_window(p, ic, t);
        const auto v = solution_profile(p, ic, t, w);
        CHECK(std::abs(profile_mass(p, ic, t, w, v) - 1.0) < 1e-6);
        for (double x : v) CHECK(x >= 0.0);
      }
    }
  }
}

TEST_CASE("survival starts at one") {
  for (int m : {2, 3, 10})
    for (double beta : {0.3, 1.0}) CHECK(survival({m, 1.3, beta}, 0.0) == 1.0);
  CHECK(indicator_solution({3, 1.0, 0.5}, 0, 0.0) == 1.0);
  CHECK(indicator_solution({3, 1.0, 0.5}, 1, 0.0) == 0.0);
}

TEST_CASE("shell values agree with the Fourier-side integral") {
  for (const FractionalParams p : {FractionalParams{3, 1.0, 1.0}, FractionalParams{3, 1.0, 0.5},
                                   FractionalParams{2, 1.5, 0.8}}) {
    for (double t : {0.5, 2.0}) {
      for (int j = -4; j <= 4; ++j) {
        const double g = green_function(p, j, t);
        CHECK(std::abs(g - fourier_route(p, j, t, 80)) <= 1e-10 * std::max(1.0, g));
        const double u = indicator_solution(p, j, t);
        CHECK(std::abs(u - fourier_route(p, j, t, 0)) <= 1e-12);
      }
      const auto one = RadialFunction::formula(p.m, [&](int i) {
        return cplx(mittag_leffler(p.beta, -std::pow(p.m, i * p.alpha) * std::pow(t, p.beta)));
      });
      CHECK(survival(p, t) == doctest::Approx(integrate_radial(one, 0).value.real()).epsilon(1e-12));
    }
  }
}

TEST_CASE("point source is flat at deep inner shells for beta = 1") {
  const FractionalParams p{3, 1.0, 1.0};
  const auto v = solution_profile(p, InitialCondition::delta, 1.0, {-60, -20});
  // u(0, 1) = (1 - 1/m) sum_i m^i exp(-m^i)
  double origin = 0.0;
  for (int i = -80; i <= 10; ++i) origin += (1.0 - 1.0 / 3.0) * std::pow(3.0, i) * std::exp(-std::pow(3.0, i));
  for (double x : v) CHECK(x == doctest::Approx(origin).epsilon(1e-12));
}

TEST_CASE("Caputo residual and refinement") {
  const FractionalParams p{3, 1.0, 0.5};
  const auto coarse = tabulate(p, InitialCondition::unit_ball, graded_times(1.0, 64), {-30, 30});
  const auto fine = tabulate(p, InitialCondition::unit_ball, graded_times(1.0, 128), {-30, 30});
  const double r64 = caputo_residual(coarse);
  const double r128 = caputo_residual(fine);
  CHECK(r64 < 1e-4);
  CHECK(r64 / r128 >= 1.8);
  // The lower-order schemes converge too, just slower.
  CHECK(caputo_residual(fine, CaputoScheme::power_l1) <
        caputo_residual(coarse, CaputoScheme::power_l1));

  const FractionalParams q{3, 1.0, 1.0};
  const auto plain = tabulate(q, InitialCondition::unit_ball, graded_times(1.0, 64), {-30, 30});
  CHECK(caputo_residual(plain) < 1e-4);
}

TEST_CASE("Caputo residual rejects ungraded grids") {
  const FractionalParams p{3, 1.0, 0.5};
  const auto sol = tabulate(p, InitialCondition::unit_ball, {0.5, 1.0, 1.5}, {-5, 5});
  CHECK_THROWS_AS(caputo_residual(sol), DomainError);
}

TEST_CASE("graded times") {
  const auto t = graded_times(2.0, 4);
  REQUIRE(t.size() == 5);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 2.0);
  CHECK(t[2] == doctest::Approx(0.5));
  CHECK_THROWS_AS(graded_times(1.0, 0), DomainError);
}

TEST_CASE("parallel tabulation matches the serial one") {
  const FractionalParams p{3, 1.2, 0.6};
  const auto times = graded_times(3.0, 40);
  const auto a = tabulate_serial(p, InitialCondition::delta, times, {-20, 20});
  const auto b = tabulate(p, InitialCondition::delta, times, {-20, 20});
  CHECK(a.values == b.values);
}

TEST_CASE("survival lies between the power-law bounds") {
  for (double alpha : {2.0, 0.5, 1.0}) {
    const FractionalParams p{3, alpha, 0.5};
    for (double t : {1e2, 1e3, 1e4, 1e5}) {
      const double s = survival(p, t);
      const auto b = survival_bounds(p, t);
      CHECK(b.lower <= s);
      CHECK(s <= b.upper);
      const auto r = survival_rate(p, t);
      CHECK(r.lower <= s);
      CHECK(s <= r.upper);
    }
  }
  CHECK(survival_rate({3, 2.0, 0.5}, 1e3).branch == RateBranch::theta_limit);
  CHECK(survival_rate({3, 0.5, 0.5}, 1e3).branch == RateBranch::inverse_power);
  CHECK(survival_rate({3, 1.0, 0.5}, 1e3).branch == RateBranch::logarithmic);
  CHECK(survival_rate({3, 0.5, 1.0}, 1e3).branch == RateBranch::theta_limit);
}

TEST_CASE("Theta limit equals the Mellin transform of E_beta") {
  // int_0^inf E_beta(-y) y^{s-1} dy = Gamma(s) Gamma(1-s) / Gamma(1 - beta s), 0 < s < 1
  for (double beta : {0.3, 0.5, 0.8}) {
    for (double alpha : {1.5, 2.0, 4.0}) {
      const double s = 1.0 / alpha;
      const double want =
          std::numbers::pi / (std::sin(std::numbers::pi * s) * std::tgamma(1.0 - beta * s));
      const auto th = theta(beta, alpha, INFINITY);
      CHECK(th.value == doctest::Approx(want).epsilon(1e-9));
    }
  }
  // beta = 1: int_0^T e^{-y} y^{1/alpha - 1} dy is a lower incomplete gamma.
  const auto th = theta(1.0, 2.0, 4.0);
  CHECK(th.value == doctest::Approx(std::sqrt(std::numbers::pi) * std::erf(2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(theta(0.5, 0.5, INFINITY), DomainError);
}

TEST_CASE("automatic window and its limits") {
  const FractionalParams p{3, 1.0, 0.5};
  const auto w = auto_window(p, InitialCondition::unit_ball, 1.0, {-5, 5}, 1e-6);
  CHECK(w.lo <= -5);
  CHECK(w.hi >= 5);
  CHECK_THROWS_AS(auto_window(p, InitialCondition::delta, 1.0, {0, 1}, 1e-30), ToleranceError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate({3, 1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(validate({3, 1.0, 1.5}), DomainError);
  CHECK_THROWS_AS(validate({3, -1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(validate({1, 1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(green_function({3, 1.0, 0.5}, 0, -1.0), DomainError);
  CHECK_THROWS_AS(solution_profile({3, 1.0, 0.5}, InitialCondition::delta, 1.0, {2, 1}),
                  DomainError);
}

}  // TEST_SUITE
