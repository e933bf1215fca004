#pragma once

// Uncoupled continuous-time random walks on Q_m: waiting-time and jump laws,
// Monte Carlo endpoints X(t) = sum_{i <= N(t)} xi_i, and the Laplace-Fourier
// Montroll-Weiss relations that describe their marginals exactly.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "madic/core.hpp"
#include "madic/haar.hpp"

namespace madic {

/// Per-sample random stream: std::mt19937_64 seeded from (master seed,
/// sample index), so results do not depend on how samples are scheduled.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index);
  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Distribution of the waiting times T_i.
class WaitingTimeModel {
 public:
  enum class Kind { exponential, mittag_leffler };

  /// psi(t) = lambda e^{-lambda t}
  static WaitingTimeModel exponential(double rate);
  /// psi^(s) = 1 / (1 + (tau s)^beta); beta = 1 is exponential with rate 1/tau.
  static WaitingTimeModel mittag_leffler(double beta, double tau = 1.0);

  Kind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  double beta() const noexcept { return beta_; }
  double tau() const noexcept { return tau_; }

  /// Laplace transform psi^(s), s >= 0.
  double laplace(double s) const;
  /// P(T > t)
  double survival(double t) const;
  double sample(SampleStream& rng) const;

 private:
  Kind kind_ = Kind::exponential;
  double rate_ = 1.0;
  double beta_ = 1.0;
  double tau_ = 1.0;
};

/// Jump law: shell probabilities p_j = P(|xi|_m = m^j) on a window, uniform
/// within each shell.
class JumpModel {
 public:
  JumpModel(int m, int j_lo, std::vector<double> pmf);

  /// All jumps on the sphere |xi|_m = m^j.
  static JumpModel single_shell(int m, int j);
  /// Shell masses of the law with characteristic function exp(-|k|^alpha),
  /// restricted to `window` and renormalized.
  static JumpModel stable(int m, double alpha, int j_lo = -30, int j_hi = 30);

  int base() const noexcept { return m_; }
  int j_lo() const noexcept { return j_lo_; }
  int j_hi() const noexcept { return j_lo_ + static_cast<int>(pmf_.size()) - 1; }
  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double probability(int j) const;

  /// Law of h xi with |h|_m = m^{-n}: shell j moves to j - n.
  JumpModel scaled(int n) const;

  /// phi~(k) = sum_j p_j s_j(k), with s_j the sphere character integral
  /// normalized by mu(S_j).
  double characteristic(Norm k) const;

  MadicNumber sample(SampleStream& rng, int precision = kDefaultPrecision) const;

 private:
  int m_;
  int j_lo_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

struct CtrwModel {
  WaitingTimeModel waiting;
  JumpModel jumps;
};

/// One simulated endpoint.
struct PathSample {
  std::uint64_t index = 0;
  int jumps = 0;  // N(t)
  MadicNumber endpoint = MadicNumber::zero(2);
  std::vector<double> event_times;
  /// A jump fell entirely below the digits still known for the running sum.
  bool precision_loss = false;
};

PathSample sample_endpoint(const CtrwModel& model, double t, std::uint64_t seed,
                           std::uint64_t index, bool record_events = false);

/// Samples indices 0..count-1; serial reference.
std::vector<PathSample> sample_endpoints_serial(const CtrwModel& model, double t,
                                                std::size_t count, std::uint64_t seed);
/// Same samples computed on OpenMP threads; identical output.
std::vector<PathSample> sample_endpoints(const CtrwModel& model, double t, std::size_t count,
                                         std::uint64_t seed);

/// p^(s, n) = psi^(s)^n (1 - psi^(s)) / s, the Laplace transform of P(N(t) = n).
double counting_pmf_laplace(const WaitingTimeModel& w, double s, int n);

/// f^~(k, s) = (1 - psi^(s)) / s / (1 - psi^(s) phi~(k)).
double montroll_weiss(const WaitingTimeModel& w, const JumpModel& j, Norm k, double s);
/// Phi^(s) = (1 - psi^(s)) / (s psi^(s)), the memory function of the
/// alternative form Phi^(s) [s f - 1] = [phi~(k) - 1] f.
double memory_function(const WaitingTimeModel& w, double s);
/// f^~(k, s) solved from the alternative form.
double montroll_weiss_alternative(const WaitingTimeModel& w, const JumpModel& j, Norm k,
                                  double s);

/// Shell probabilities with an explicit bin for the point X = 0.
struct ShellPmf {
  double zero = 0.0;
  int j_lo = 0;
  std::vector<double> p;

  double at(int j) const;
  int j_hi() const { return j_lo + static_cast<int>(p.size()) - 1; }
};

/// 1/2 sum |a - b| over the zero bin and every shell present in either.
double total_variation(const ShellPmf& a, const ShellPmf& b);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// 95% Wilson score interval for k successes in n trials.
WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

struct ShellHistogram {
  std::uint64_t total = 0;
  std::uint64_t zero = 0;
  int j_lo = 0;
  std::vector<std::uint64_t> counts;

  ShellPmf pmf() const;
  WilsonInterval interval(int j) const;
  WilsonInterval zero_interval() const;
};

ShellHistogram shell_histogram(const std::vector<PathSample>& samples);

/// P(X in B_s) = m^s int_{|k| <= m^{-s}} f^(k) dk for a radial
/// characteristic function given on k-shells.
SeriesResult radial_inverse_ball_prob(const RadialFunction& fhat, int s);

/// Shell pmf of a radial law from its characteristic function. `atom` is the
/// mass at X = 0, which the caller has removed from fhat so that fhat decays.
ShellPmf radial_inverse_shell_pmf(const RadialFunction& fhat, double atom, int j_lo, int j_hi);

/// Shell pmf of the exponential-waiting CTRW at time t, which is the Levy
/// law with characteristic function exp(lambda t (phi~(k) - 1)).
ShellPmf exponential_ctrw_pmf(double rate, const JumpModel& jumps, double t, int j_lo,
                              int j_hi);

/// Exact shell pmf of X(t) for either waiting law. Mittag-Leffler waiting
/// gives the characteristic function E_beta(-(t/tau)^beta (1 - phi~(k))).
ShellPmf ctrw_marginal_pmf(const CtrwModel& model, double t, int j_lo, int j_hi);

}  // namespace madic
