#include <doctest.h>

#include <cmath>
#include <random>

#include "madic/ctrw.hpp"
#include "madic/errors.hpp"
#include "madic/fractional.hpp"
#include "madic/levy.hpp"
#include "madic/mittag_leffler.hpp"

using namespace madic;

TEST_SUITE("ctrw") {

TEST_CASE("sample streams are reproducible and in range") {
  SampleStream a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    if (u != c.uniform()) differs = true;
  }
  CHECK(differs);
  for (int i = 0; i < 1000; ++i) CHECK(a.below(7) < 7);
}

TEST_CASE("nothing happens at t = 0") {
  const CtrwModel model{WaitingTimeModel::exponential(1.0), JumpModel::single_shell(3, 0)};
  const auto s = sample_endpoint(model, 0.0, 1, 0, true);
  CHECK(s.jumps == 0);
  CHECK(s.endpoint.is_exact_zero());
  CHECK(s.event_times.empty());
  CHECK_THROWS_AS(sample_endpoint(model, -1.0, 1, 0), DomainError);
}

TEST_CASE("exponential waiting gives Poisson jump counts") {
  const CtrwModel model{WaitingTimeModel::exponential(2.0), JumpModel::single_shell(3, 0)};
  const auto samples = sample_endpoints(model, 5.0, 20000, 11);
  double mean = 0.0, sq = 0.0;
  for (const auto& s : samples) {
    mean += s.jumps;
    sq += double(s.jumps) * s.jumps;
  }
  mean /= samples.size();
  const double var = sq / samples.size() - mean * mean;
  // standard error of the mean is sqrt(10 / 20000) ~ 0.022
  CHECK(std::abs(mean - 10.0) < 0.1);
  CHECK(std::abs(var - 10.0) < 0.6);
  // Every jump lands on the unit sphere; a sum of such jumps stays in Z_m.
  for (const auto& s : samples)
    if (!s.endpoint.is_zero()) CHECK(s.endpoint.valuation() >= 0);
}

TEST_CASE("Mittag-Leffler waiting times") {
  const auto w = WaitingTimeModel::mittag_leffler(0.6, 1.5);
  const int n = 40000;
  int beyond = 0;
  for (int i = 0; i < n; ++i) {
    SampleStream rng(5, static_cast<std::uint64_t>(i));
    if (w.sample(rng) > 2.0) ++beyond;
  }
  const double p = w.survival(2.0);
  CHECK(p == doctest::Approx(mittag_leffler(0.6, -std::pow(2.0 / 1.5, 0.6))).epsilon(1e-14));
  const double se = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(double(beyond) / n - p) < 4.5 * se);

  // P(N(t) = 0) = P(T_1 > t)
  const CtrwModel model{WaitingTimeModel::mittag_leffler(0.5), JumpModel::single_shell(2, 0)};
  const auto samples = sample_endpoints(model, 3.0, 20000, 3);
  int none = 0;
  for (const auto& s : samples) none += s.jumps == 0;
  const double q = mittag_leffler(0.5, -std::sqrt(3.0));
  CHECK(std::abs(double(none) / 20000 - q) < 4.5 * std::sqrt(q * (1.0 - q) / 20000));

  CHECK(WaitingTimeModel::mittag_leffler(1.0, 2.0).laplace(3.0) ==
        doctest::Approx(WaitingTimeModel::exponential(0.5).laplace(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(WaitingTimeModel::mittag_leffler(0.0), DomainError);
  CHECK_THROWS_AS(WaitingTimeModel::exponential(-1.0), DomainError);
}

TEST_CASE("counting distribution in the Laplace domain") {
  for (const auto& w : {WaitingTimeModel::exponential(1.7), WaitingTimeModel::mittag_leffler(0.5),
                        WaitingTimeModel::mittag_leffler(0.8, 2.0)}) {
    for (double s : {0.05, 1.0, 10.0}) {
      double total = 0.0;
      for (int n = 0; n < 20000; ++n) total += counting_pmf_laplace(w, s, n);
      CHECK(std::abs(total - 1.0 / s) <= 1e-10 * (1.0 / s));
    }
  }
  const auto e = WaitingTimeModel::exponential(2.0);
  for (int n : {0, 1, 5})
    CHECK(counting_pmf_laplace(e, 0.5, n) ==
          doctest::Approx(std::pow(2.0, n) / std::pow(2.5, n + 1)).epsilon(1e-14));
  CHECK_THROWS_AS(counting_pmf_laplace(e, 0.0, 1), DomainError);
  CHECK_THROWS_AS(counting_pmf_laplace(e, 1.0, -1), DomainError);
}

TEST_CASE("both Montroll-Weiss forms agree") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> log_s(-3.0, 3.0);
  std::uniform_int_distribution<int> kappa(-6, 6);
  const auto jumps = JumpModel::stable(3, 1.2);
  for (const auto& w : {WaitingTimeModel::exponential(1.0), WaitingTimeModel::mittag_leffler(0.6)}) {
    for (int i = 0; i < 1000; ++i) {
      const double s = std::pow(10.0, log_s(gen));
      const Norm k = Norm::power(kappa(gen));
      const double a = montroll_weiss(w, jumps, k, s);
      const double b = montroll_weiss_alternative(w, jumps, k, s);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
    CHECK(montroll_weiss(w, jumps, Norm::zero(), 0.3) == doctest::Approx(1.0 / 0.3));
  }
  // Exponential waiting is the resolvent of the compound Poisson generator.
  const double lambda = 1.5;
  const auto e = WaitingTimeModel::exponential(lambda);
  for (int kp = -3; kp <= 3; ++kp) {
    const double phi = jumps.characteristic(Norm::power(kp));
    const double s = 0.8;
    CHECK(montroll_weiss(e, jumps, Norm::power(kp), s) ==
          doctest::Approx(1.0 / (s + lambda * (1.0 - phi))).epsilon(1e-13));
  }
  CHECK(memory_function(e, 2.0) == doctest::Approx(1.0 / lambda));
  CHECK_THROWS_AS(montroll_weiss(e, jumps, Norm::power(0), -1.0), DomainError);
}

TEST_CASE("jump laws") {
  const auto one = JumpModel::single_shell(5, 2);
  CHECK(one.characteristic(Norm::power(-2)) == 1.0);
  CHECK(one.characteristic(Norm::power(-1)) == doctest::Approx(-0.25));
  CHECK(one.characteristic(Norm::power(3)) == 0.0);
  CHECK(one.scaled(3).j_lo() == -1);
  CHECK_THROWS_AS(JumpModel(3, 0, {0.5, 0.4}), DomainError);
  CHECK_THROWS_AS(JumpModel(3, 0, {1.5, -0.5}), DomainError);

  // The stable law's shell masses are those of the beta = 1 point source.
  const auto stable = JumpModel::stable(3, 1.0);
  for (int j = -6; j <= 6; ++j)
    CHECK(stable.probability(j) == doctest::Approx(green_function({3, 1.0, 1.0}, j, 1.0) *
                                                   sphere_measure(3, j))
                                       .epsilon(1e-10));
  for (int kp = -4; kp <= 4; ++kp)
    CHECK(stable.characteristic(Norm::power(kp)) ==
          doctest::Approx(std::exp(-std::pow(3.0, kp))).epsilon(1e-10));

  SampleStream rng(9, 0);
  for (int i = 0; i < 200; ++i) {
    const auto x = one.sample(rng);
    CHECK(x.norm() == Norm::power(2));
  }
}

TEST_CASE("histograms, total variation and Wilson intervals") {
  const CtrwModel model{WaitingTimeModel::exponential(1.0), JumpModel::single_shell(3, 0)};
  const auto frozen = sample_endpoints(model, 0.0, 50, 1);
  const auto h = shell_histogram(frozen);
  CHECK(h.zero == 50);
  CHECK(h.counts.empty());
  CHECK(h.pmf().zero == 1.0);
  CHECK_THROWS_AS(shell_histogram({}), DomainError);

  ShellPmf a{0.2, 0, {0.5, 0.3}}, b{0.0, 1, {0.3, 0.7}};
  CHECK(total_variation(a, a) == 0.0);
  CHECK(total_variation(a, b) == doctest::Approx(0.5 * (0.2 + 0.5 + 0.0 + 0.7)));
  CHECK(total_variation(ShellPmf{1.0, 0, {}}, ShellPmf{0.0, 4, {1.0}}) == 1.0);

  const auto narrow = wilson_interval(40000, 100000);
  const auto wide = wilson_interval(20000, 50000);
  CHECK(narrow.lower < 0.4);
  CHECK(narrow.upper > 0.4);
  const double ratio = (wide.upper - wide.lower) / (narrow.upper - narrow.lower);
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(wilson_interval(0, 10).lower == 0.0);
  CHECK(wilson_interval(10, 10).upper == 1.0);
}

TEST_CASE("radial inversion") {
  // Omega(|k| <= 1) is the transform of the uniform law on Z_m.
  const auto ball = RadialFunction::tabulated(3, 0, {1.0}, RadialFunction::Tail::hold);
  CHECK(radial_inverse_ball_prob(ball, 0).value.real() == doctest::Approx(1.0));
  CHECK(radial_inverse_ball_prob(ball, -1).value.real() == doctest::Approx(1.0 / 3.0));
  CHECK(radial_inverse_ball_prob(ball, 2).value.real() == doctest::Approx(1.0));
  const auto flat = RadialFunction::tabulated(3, 0, {1.0}, RadialFunction::Tail::hold,
                                              RadialFunction::Tail::hold);
  CHECK_THROWS_AS(radial_inverse_ball_prob(flat, 0), DivergenceError);
  CHECK_THROWS_AS(radial_inverse_ball_prob(RadialFunction::formula(3, [](int) { return cplx(0.5); }), 0),
                  DivergenceError);

  // exp(-|k|^alpha t) inverts to the beta = 1 fractional solution.
  const double alpha = 1.5, t = 0.7;
  const auto fhat = RadialFunction::formula(3, [&](int i) {
    return cplx(std::exp(-std::pow(3.0, i * alpha) * t));
  });
  const auto pmf = radial_inverse_shell_pmf(fhat, 0.0, -8, 8);
  for (int j = -8; j <= 8; ++j) {
    const double want = green_function({3, alpha, 1.0}, j, t) * sphere_measure(3, j);
    CHECK(std::abs(pmf.at(j) - want) < 1e-12);
  }
}

TEST_CASE("exponential CTRW marginal through the Levy engine") {
  // With exponential waiting the walk is the Levy process with kernel
  // W_j = lambda p_j / mu(S_j); its characteristic function is exp(t psi).
  const double lambda = 1.3, t = 2.0;
  const auto jumps = JumpModel::stable(3, 0.8, -20, 20);
  std::vector<double> w;
  for (int j = jumps.j_lo(); j <= jumps.j_hi(); ++j)
    w.push_back(lambda * jumps.probability(j) / sphere_measure(3, j));
  const auto kernel = LevyKernel::tabulated(3, jumps.j_lo(), w);
  for (int kp = -5; kp <= 5; ++kp) {
    const double psi = levy_symbol(kernel, Norm::power(kp)).value.real();
    CHECK(psi == doctest::Approx(lambda * (jumps.characteristic(Norm::power(kp)) - 1.0))
                     .epsilon(1e-12));
  }
  const double atom = std::exp(-lambda * t);
  const auto fhat = RadialFunction::formula(3, [&](int i) {
    return cplx(std::exp(t * levy_symbol(kernel, Norm::power(i)).value.real()) - atom);
  });
  const auto via_levy = radial_inverse_shell_pmf(fhat, atom, -10, 10);
  const auto direct = exponential_ctrw_pmf(lambda, jumps, t, -10, 10);
  CHECK(total_variation(via_levy, direct) < 1e-12);
  CHECK(direct.zero == doctest::Approx(atom));
}

TEST_CASE("exact marginal against simulation") {
  const CtrwModel model{WaitingTimeModel::mittag_leffler(0.7), JumpModel::stable(2, 1.0)};
  const auto samples = sample_endpoints(model, 2.0, 20000, 17);
  const auto analytic = ctrw_marginal_pmf(model, 2.0, -40, 40);
  CHECK(total_variation(shell_histogram(samples).pmf(), analytic) < 0.03);
  double mass = analytic.zero;
  for (double p : analytic.p) mass += p;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("parallel sampling reproduces the serial samples") {
  const CtrwModel model{WaitingTimeModel::mittag_leffler(0.6), JumpModel::stable(3, 1.0)};
  const auto a = sample_endpoints_serial(model, 3.0, 3000, 99);
  const auto b = sample_endpoints(model, 3.0, 3000, 99);
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    same = same && a[i].index == b[i].index && a[i].jumps == b[i].jumps &&
           a[i].endpoint == b[i].endpoint;
  CHECK(same);
}

}  // TEST_SUITE
