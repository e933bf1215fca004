#include "madic/ctrw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "madic/errors.hpp"
#include "madic/mittag_leffler.hpp"

namespace madic {

namespace {

std::seed_seq make_seed(std::uint64_t seed, std::uint64_t index) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(index),
                       static_cast<std::uint32_t>(index >> 32)};
}

// 1 - psi^(s) without cancellation for small s.
double one_minus_laplace(const WaitingTimeModel& w, double s) {
  if (w.kind() == WaitingTimeModel::Kind::exponential) return s / (s + w.rate());
  const double x = std::pow(w.tau() * s, w.beta());
  return x / (1.0 + x);
}

void check_laplace_argument(double s) {
  if (!(s > 0.0) || !std::isfinite(s))
    throw DomainError(fmt::format("Laplace variable must be positive, got {}", s));
}

}  // namespace

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index) {
  auto seq = make_seed(seed, index);
  engine_.seed(seq);
}

double SampleStream::uniform() {
  // 53 random bits centred in their cell: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t SampleStream::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return x % n;
}

WaitingTimeModel WaitingTimeModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw DomainError(fmt::format("waiting rate must be positive, got {}", rate));
  WaitingTimeModel w;
  w.kind_ = Kind::exponential;
  w.rate_ = rate;
  return w;
}

WaitingTimeModel WaitingTimeModel::mittag_leffler(double beta, double tau) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError(fmt::format("waiting order must lie in (0, 1], got {}", beta));
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw DomainError(fmt::format("waiting scale must be positive, got {}", tau));
  WaitingTimeModel w;
  w.kind_ = Kind::mittag_leffler;
  w.beta_ = beta;
  w.tau_ = tau;
  w.rate_ = 1.0 / tau;
  return w;
}

double WaitingTimeModel::laplace(double s) const {
  if (!(s >= 0.0)) throw DomainError(fmt::format("Laplace variable must be >= 0, got {}", s));
  if (kind_ == Kind::exponential) return rate_ / (s + rate_);
  return 1.0 / (1.0 + std::pow(tau_ * s, beta_));
}

double WaitingTimeModel::survival(double t) const {
  if (t <= 0.0) return 1.0;
  if (kind_ == Kind::exponential) return std::exp(-rate_ * t);
  return madic::mittag_leffler(beta_, -std::pow(t / tau_, beta_));
}

double WaitingTimeModel::sample(SampleStream& rng) const {
  const double e = -std::log(rng.uniform());
  if (kind_ == Kind::exponential) return e / rate_;
  if (beta_ == 1.0) return tau_ * e;
  // Exponential times a positive stable-type factor:
  //   T = tau E (sin(beta pi) / tan(beta pi V) - cos(beta pi))^{1/beta},
  // rewritten as sin(beta pi (1 - V)) / sin(beta pi V) to stay positive.
  const double v = rng.uniform();
  const double bp = beta_ * std::numbers::pi;
  const double ratio = std::sin(bp * (1.0 - v)) / std::sin(bp * v);
  return tau_ * e * std::pow(ratio, 1.0 / beta_);
}

JumpModel::JumpModel(int m, int j_lo, std::vector<double> pmf)
    : m_(m), j_lo_(j_lo), pmf_(std::move(pmf)) {
  check_base(m);
  if (pmf_.empty()) throw DomainError("jump law needs at least one shell");
  double total = 0.0;
  for (double p : pmf_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw DomainError("shell probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError(fmt::format("shell probabilities sum to {}, not 1", total));
  cdf_.resize(pmf_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) cdf_[i] = (acc += pmf_[i]);
  cdf_.back() = 1.0;
}

JumpModel JumpModel::single_shell(int m, int j) { return JumpModel(m, j, {1.0}); }

JumpModel JumpModel::stable(int m, double alpha, int j_lo, int j_hi) {
  check_base(m);
  if (!(alpha > 0.0)) throw DomainError(fmt::format("stability index must be positive, got {}", alpha));
  if (j_hi < j_lo) throw DomainError("empty shell window");
  const auto fhat = RadialFunction::formula(m, [m, alpha](int i) {
    return cplx(std::exp(-std::pow(mpow(m, i), alpha)), 0.0);
  });
  ShellPmf shells = radial_inverse_shell_pmf(fhat, 0.0, j_lo, j_hi);
  double total = 0.0;
  for (double& p : shells.p) total += (p = std::max(p, 0.0));
  for (double& p : shells.p) p /= total;
  return JumpModel(m, j_lo, std::move(shells.p));
}

double JumpModel::probability(int j) const {
  if (j < j_lo_ || j > j_hi()) return 0.0;
  return pmf_[static_cast<std::size_t>(j - j_lo_)];
}

JumpModel JumpModel::scaled(int n) const { return JumpModel(m_, j_lo_ - n, pmf_); }

double JumpModel::characteristic(Norm k) const {
  if (k.is_zero()) return 1.0;
  // s_j = 1 for j <= -kappa, -1/(m-1) for j = 1 - kappa, 0 beyond.
  const int kappa = k.exponent();
  double sum = 0.0;
  for (int j = j_lo_; j <= std::min(j_hi(), -kappa); ++j) sum += probability(j);
  sum -= probability(1 - kappa) / (m_ - 1);
  return sum;
}

MadicNumber JumpModel::sample(SampleStream& rng, int precision) const {
  const double u = rng.uniform();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const int j = j_lo_ + static_cast<int>(std::min<std::ptrdiff_t>(
                            it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(precision));
  digits[0] = static_cast<std::uint8_t>(1 + rng.below(static_cast<std::uint64_t>(m_ - 1)));
  for (std::size_t i = 1; i < digits.size(); ++i)
    digits[i] = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(m_)));
  return MadicNumber::from_digits(m_, -j, std::move(digits));
}

PathSample sample_endpoint(const CtrwModel& model, double t, std::uint64_t seed,
                           std::uint64_t index, bool record_events) {
  if (!(t >= 0.0)) throw DomainError(fmt::format("time must be nonnegative, got {}", t));
  PathSample out;
  out.index = index;
  out.endpoint = MadicNumber::zero(model.jumps.base());
  SampleStream rng(seed, index);
  double clock = 0.0;
  for (;;) {
    const double wait = model.waiting.sample(rng);
    if (clock + wait > t) break;
    clock += wait;
    const MadicNumber xi = model.jumps.sample(rng);
    if (!out.endpoint.is_exact_zero() && xi.valuation() >= out.endpoint.absolute_precision())
      out.precision_loss = true;
    out.endpoint = out.endpoint + xi;
    ++out.jumps;
    if (record_events) out.event_times.push_back(clock);
  }
  if (out.jumps > 0 && out.endpoint.is_zero()) out.precision_loss = true;
  return out;
}

std::vector<PathSample> sample_endpoints_serial(const CtrwModel& model, double t,
                                                std::size_t count, std::uint64_t seed) {
  std::vector<PathSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_endpoint(model, t, seed, i));
  return out;
}

std::vector<PathSample> sample_endpoints(const CtrwModel& model, double t, std::size_t count,
                                         std::uint64_t seed) {
  if (!(t >= 0.0)) throw DomainError(fmt::format("time must be nonnegative, got {}", t));
  std::vector<PathSample> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        sample_endpoint(model, t, seed, static_cast<std::uint64_t>(i));
  return out;
}

double counting_pmf_laplace(const WaitingTimeModel& w, double s, int n) {
  check_laplace_argument(s);
  if (n < 0) throw DomainError(fmt::format("jump count must be nonnegative, got {}", n));
  return std::pow(w.laplace(s), n) * one_minus_laplace(w, s) / s;
}

double montroll_weiss(const WaitingTimeModel& w, const JumpModel& j, Norm k, double s) {
  check_laplace_argument(s);
  if (k.is_zero()) return 1.0 / s;
  const double psi = w.laplace(s);
  const double phi = j.characteristic(k);
  return one_minus_laplace(w, s) / s / (1.0 - psi * phi);
}

double memory_function(const WaitingTimeModel& w, double s) {
  check_laplace_argument(s);
  return one_minus_laplace(w, s) / (s * w.laplace(s));
}

double montroll_weiss_alternative(const WaitingTimeModel& w, const JumpModel& j, Norm k,
                                  double s) {
  const double big_phi = memory_function(w, s);
  const double phi = j.characteristic(k);
  return big_phi / (s * big_phi + (1.0 - phi));
}

double ShellPmf::at(int j) const {
  if (j < j_lo || j > j_hi()) return 0.0;
  return p[static_cast<std::size_t>(j - j_lo)];
}

double total_variation(const ShellPmf& a, const ShellPmf& b) {
  double sum = std::abs(a.zero - b.zero);
  const bool ea = a.p.empty(), eb = b.p.empty();
  if (!ea || !eb) {
    const int lo = ea ? b.j_lo : eb ? a.j_lo : std::min(a.j_lo, b.j_lo);
    const int hi = ea ? b.j_hi() : eb ? a.j_hi() : std::max(a.j_hi(), b.j_hi());
    for (int j = lo; j <= hi; ++j) sum += std::abs(a.at(j) - b.at(j));
  }
  return 0.5 * sum;
}

WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  // The bounds at k = 0 and k = n are exactly 0 and 1; pin them against rounding.
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

ShellPmf ShellHistogram::pmf() const {
  ShellPmf out;
  out.j_lo = j_lo;
  if (total == 0) return out;
  const double n = static_cast<double>(total);
  out.zero = static_cast<double>(zero) / n;
  out.p.reserve(counts.size());
  for (auto c : counts) out.p.push_back(static_cast<double>(c) / n);
  return out;
}

WilsonInterval ShellHistogram::interval(int j) const {
  const int hi = j_lo + static_cast<int>(counts.size()) - 1;
  const std::uint64_t k = (j < j_lo || j > hi) ? 0 : counts[static_cast<std::size_t>(j - j_lo)];
  return wilson_interval(k, total);
}

WilsonInterval ShellHistogram::zero_interval() const { return wilson_interval(zero, total); }

ShellHistogram shell_histogram(const std::vector<PathSample>& samples) {
  if (samples.empty()) throw DomainError("histogram needs at least one sample");
  ShellHistogram h;
  h.total = samples.size();
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (const auto& s : samples) {
    if (s.endpoint.is_zero()) continue;
    const int j = -s.endpoint.valuation();
    lo = std::min(lo, j);
    hi = std::max(hi, j);
  }
  if (lo > hi) {
    h.zero = h.total;
    return h;
  }
  h.j_lo = lo;
  h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& s : samples) {
    if (s.endpoint.is_zero())
      ++h.zero;
    else
      ++h.counts[static_cast<std::size_t>(-s.endpoint.valuation() - lo)];
  }
  return h;
}

SeriesResult radial_inverse_ball_prob(const RadialFunction& fhat, int s) {
  // A characteristic function that keeps a nonzero value at large |k| has an
  // atom, which the ball sums cannot separate from the shells.
  if (fhat.is_tabulated()) {
    if (fhat.above() == RadialFunction::Tail::hold && std::abs(fhat.values().back()) > 0.0)
      throw DivergenceError("characteristic function does not decay in |k|");
  } else if (std::abs(fhat(kMaxShells)) > 1e-12) {
    throw DivergenceError("characteristic function does not decay in |k|");
  }
  SeriesResult r = integrate_radial(fhat, -s);
  const double scale = mpow(fhat.base(), s);
  r.value *= scale;
  r.tail_bound *= scale;
  return r;
}

ShellPmf radial_inverse_shell_pmf(const RadialFunction& fhat, double atom, int j_lo, int j_hi) {
  if (j_hi < j_lo) throw DomainError("empty shell window");
  ShellPmf out;
  out.zero = atom;
  out.j_lo = j_lo;
  out.p.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
  double previous = radial_inverse_ball_prob(fhat, j_lo - 1).value.real();
  for (int j = j_lo; j <= j_hi; ++j) {
    const double ball = radial_inverse_ball_prob(fhat, j).value.real();
    out.p.push_back(ball - previous);
    previous = ball;
  }
  return out;
}

ShellPmf exponential_ctrw_pmf(double rate, const JumpModel& jumps, double t, int j_lo,
                              int j_hi) {
  return ctrw_marginal_pmf({WaitingTimeModel::exponential(rate), jumps}, t, j_lo, j_hi);
}

ShellPmf ctrw_marginal_pmf(const CtrwModel& model, double t, int j_lo, int j_hi) {
  if (!(t >= 0.0)) throw DomainError(fmt::format("time must be nonnegative, got {}", t));
  const WaitingTimeModel& w = model.waiting;
  const JumpModel& jumps = model.jumps;
  // Both laws give a function of 1 - phi~(k); its value at phi~ = 0 is the
  // atom at X = 0 (no jump yet), removed so that the remainder decays.
  std::function<double(double)> g;
  if (w.kind() == WaitingTimeModel::Kind::exponential) {
    const double lt = w.rate() * t;
    g = [lt](double x) { return std::exp(-lt * x); };
  } else {
    const double y = std::pow(t / w.tau(), w.beta());
    const double beta = w.beta();
    g = [y, beta](double x) { return mittag_leffler(beta, -y * x); };
  }
  const double atom = g(1.0);
  const auto fhat = RadialFunction::formula(jumps.base(), [&jumps, &g, atom](int i) {
    const double phi = jumps.characteristic(Norm::power(i));
    return cplx(g(1.0 - phi) - atom, 0.0);
  });
  return radial_inverse_shell_pmf(fhat, atom, j_lo, j_hi);
}

}  // namespace madic
