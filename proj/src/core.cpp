#include "madic/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace madic {

__extension__ typedef unsigned __int128 u128;

namespace {

constexpr std::string_view kDigitChars = "0123456789abcdefghijklmnopqrstuvwxyz";

void require_same_base(const MadicNumber& x, const MadicNumber& y) {
  if (x.base() != y.base())
    throw BaseMismatch(fmt::format("base {} vs base {}", x.base(), y.base()));
}

int digit_value(char c) {
  auto pos = kDigitChars.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

// Smallest position that may carry a nonzero digit; approximate zeros report
// their absolute precision.
int low_position(const MadicNumber& x) {
  return x.is_exact_zero() ? std::numeric_limits<int>::max() : x.valuation();
}

int mod_inverse(int a, int m) {
  for (int b = 1; b < m; ++b)
    if ((a * b) % m == 1) return b;
  return -1;
}

}  // namespace

void check_base(int m) {
  if (m < 2 || m > kMaxBase)
    throw DomainError(fmt::format("base m = {} outside [2, {}]", m, kMaxBase));
}

double mpow(int m, int e) {
  if (e < 0) return 1.0 / mpow(m, -e);
  double result = 1.0;
  double b = m;
  while (e > 0) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------- UnitComplex

UnitComplex::UnitComplex(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw DomainError("phase with zero denominator");
  num %= den;
  std::uint64_t g = std::gcd(num, den);
  if (g == 0) g = den;
  num_ = num / g;
  den_ = den / g;
  if (num_ == 0) den_ = 1;
}

std::complex<double> UnitComplex::value() const {
  // Quarter turns are returned exactly.
  if (num_ == 0) return {1.0, 0.0};
  if (den_ == 2) return {-1.0, 0.0};
  if (den_ == 4) return num_ == 1 ? std::complex<double>{0.0, 1.0}
                                  : std::complex<double>{0.0, -1.0};
  // Use the angle of smallest magnitude to keep the argument small.
  double t = turns();
  if (t > 0.5) t -= 1.0;
  double a = 2.0 * std::numbers::pi * t;
  return {std::cos(a), std::sin(a)};
}

UnitComplex UnitComplex::conj() const {
  return UnitComplex((den_ - num_) % den_, den_);
}

UnitComplex operator*(const UnitComplex& a, const UnitComplex& b) {
  std::uint64_t g = std::gcd(a.den_, b.den_);
  u128 l = static_cast<u128>(a.den_ / g) * b.den_;
  if (l > std::numeric_limits<std::uint64_t>::max())
    throw DomainError("phase denominator exceeds 64 bits");
  auto den = static_cast<std::uint64_t>(l);
  u128 n = static_cast<u128>(a.num_) * (den / a.den_) +
           static_cast<u128>(b.num_) * (den / b.den_);
  return UnitComplex(static_cast<std::uint64_t>(n % den), den);
}

// ---------------------------------------------------------------- MadicNumber

MadicNumber MadicNumber::zero(int m) {
  check_base(m);
  return MadicNumber(m, State::exact_zero, 0, {});
}

MadicNumber MadicNumber::approx_zero(int m, int absolute_precision) {
  check_base(m);
  return MadicNumber(m, State::approx_zero, absolute_precision, {});
}

MadicNumber MadicNumber::from_digits(int m, int valuation,
                                     std::vector<std::uint8_t> digits) {
  check_base(m);
  for (auto d : digits)
    if (d >= m) throw DomainError(fmt::format("digit {} not below m = {}", d, m));
  const int absolute = valuation + static_cast<int>(digits.size());
  auto first = std::find_if(digits.begin(), digits.end(),
                            [](std::uint8_t d) { return d != 0; });
  if (first == digits.end()) return approx_zero(m, absolute);
  int skip = static_cast<int>(first - digits.begin());
  digits.erase(digits.begin(), first);
  return MadicNumber(m, State::nonzero, valuation + skip, std::move(digits));
}

MadicNumber MadicNumber::from_integer(std::int64_t n, int m, int precision) {
  check_base(m);
  if (precision < 1) throw DomainError("precision must be positive");
  if (n == 0) return zero(m);
  std::uint64_t mag = n < 0 ? 0 - static_cast<std::uint64_t>(n)
                            : static_cast<std::uint64_t>(n);
  int v = 0;
  while (mag % static_cast<std::uint64_t>(m) == 0) {
    mag /= static_cast<std::uint64_t>(m);
    ++v;
  }
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(precision), 0);
  for (auto& d : digits) {
    d = static_cast<std::uint8_t>(mag % static_cast<std::uint64_t>(m));
    mag /= static_cast<std::uint64_t>(m);
  }
  MadicNumber x(m, State::nonzero, v, std::move(digits));
  return n < 0 ? negate(x) : x;
}

MadicNumber MadicNumber::power_of_base(int m, int e, int precision) {
  check_base(m);
  if (precision < 1) throw DomainError("precision must be positive");
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(precision), 0);
  digits[0] = 1;
  return MadicNumber(m, State::nonzero, e, std::move(digits));
}

int MadicNumber::valuation() const noexcept {
  return state_ == State::exact_zero ? std::numeric_limits<int>::max()
                                     : valuation_;
}

int MadicNumber::absolute_precision() const noexcept {
  switch (state_) {
    case State::exact_zero: return std::numeric_limits<int>::max();
    case State::approx_zero: return valuation_;
    case State::nonzero: break;
  }
  return valuation_ + precision();
}

int MadicNumber::digit(int position) const {
  if (state_ == State::exact_zero) return 0;
  if (position >= absolute_precision())
    throw PrecisionError(fmt::format("digit at position {} is not known "
                                     "(absolute precision {})",
                                     position, absolute_precision()));
  if (state_ == State::approx_zero || position < valuation_) return 0;
  return digits_[static_cast<std::size_t>(position - valuation_)];
}

double MadicNumber::pseudonorm() const noexcept {
  return is_zero() ? 0.0 : mpow(m_, -valuation_);
}

Norm MadicNumber::norm() const noexcept {
  return is_zero() ? Norm::zero() : Norm::power(-valuation_);
}

MadicNumber MadicNumber::shifted(int e) const {
  if (state_ == State::exact_zero) return *this;
  MadicNumber r = *this;
  r.valuation_ += e;
  return r;
}

MadicNumber MadicNumber::truncated(int precision) const {
  if (precision < 1) throw DomainError("precision must be positive");
  if (state_ != State::nonzero || precision >= this->precision()) return *this;
  MadicNumber r = *this;
  r.digits_.resize(static_cast<std::size_t>(precision));
  return r;
}

std::string MadicNumber::to_string() const {
  const std::string suffix = fmt::format(" (base {})", m_);
  if (state_ == State::exact_zero) return "0" + suffix;

  const int a = absolute_precision();
  const int lo = std::min(state_ == State::nonzero ? valuation_ : a - 1, 0);
  auto known_digit = [&](int p) { return kDigitChars[static_cast<std::size_t>(digit(p))]; };

  std::string out = "...";
  if (a > 0) {
    for (int p = a - 1; p >= 0; --p) out += known_digit(p);
  } else {
    out += '?';
  }
  if (lo < 0) {
    out += '.';
    for (int p = -1; p >= lo; --p) out += p >= a ? '?' : known_digit(p);
  }
  return out + suffix;
}

MadicNumber MadicNumber::parse(std::string_view text) {
  auto fail = [&](std::string_view why) {
    return DomainError(fmt::format("cannot parse '{}': {}", text, why));
  };
  const auto open = text.rfind(" (base ");
  if (open == std::string_view::npos || text.back() != ')')
    throw fail("missing base suffix");
  int m = 0;
  for (char c : text.substr(open + 7, text.size() - open - 8)) {
    if (c < '0' || c > '9') throw fail("bad base");
    m = m * 10 + (c - '0');
    if (m > 1000) throw fail("bad base");
  }
  check_base(m);
  std::string_view body = text.substr(0, open);
  if (body == "0") return zero(m);
  if (!body.starts_with("...")) throw fail("expected leading '...'");
  body.remove_prefix(3);

  std::string_view int_part = body;
  std::string_view frac_part;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    int_part = body.substr(0, dot);
    frac_part = body.substr(dot + 1);
  }
  if (int_part.empty()) throw fail("empty integer part");

  // Known digits keyed by position, lowest first.
  std::vector<std::uint8_t> known;
  int lo = 0;
  int top = 0;  // one past the highest known position
  auto read_digit = [&](char c) {
    int d = digit_value(c);
    if (d < 0 || d >= m) throw fail("invalid digit");
    return static_cast<std::uint8_t>(d);
  };

  if (int_part == "?") {
    // Unknown prefix of the fractional part, then known digits.
    std::size_t i = 0;
    while (i < frac_part.size() && frac_part[i] == '?') ++i;
    if (i == frac_part.size()) throw fail("no known digits");
    top = -static_cast<int>(i);
    lo = -static_cast<int>(frac_part.size());
    for (std::size_t j = frac_part.size(); j-- > i;)
      known.push_back(read_digit(frac_part[j]));
  } else {
    top = static_cast<int>(int_part.size());
    lo = -static_cast<int>(frac_part.size());
    for (std::size_t j = frac_part.size(); j-- > 0;)
      known.push_back(read_digit(frac_part[j]));
    for (std::size_t j = int_part.size(); j-- > 0;)
      known.push_back(read_digit(int_part[j]));
  }
  if (top - lo != static_cast<int>(known.size())) throw fail("malformed digits");
  return from_digits(m, lo, std::move(known));
}

// ---------------------------------------------------------------- arithmetic

MadicNumber add(const MadicNumber& x, const MadicNumber& y) {
  require_same_base(x, y);
  if (x.is_exact_zero()) return y;
  if (y.is_exact_zero()) return x;
  const int m = x.base();
  const int a = std::min(x.absolute_precision(), y.absolute_precision());
  const int lo = std::min(low_position(x), low_position(y));
  if (lo >= a) return MadicNumber::approx_zero(m, a);

  std::vector<std::uint8_t> out(static_cast<std::size_t>(a - lo));
  int carry = 0;
  for (int p = lo; p < a; ++p) {
    int s = x.digit(p) + y.digit(p) + carry;
    carry = s >= m;
    out[static_cast<std::size_t>(p - lo)] = static_cast<std::uint8_t>(s - carry * m);
  }
  return MadicNumber::from_digits(m, lo, std::move(out));
}

MadicNumber negate(const MadicNumber& x) {
  if (x.is_zero()) return x;
  const int m = x.base();
  std::vector<std::uint8_t> out(x.digits().begin(), x.digits().end());
  out[0] = static_cast<std::uint8_t>(m - out[0]);
  for (std::size_t i = 1; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(m - 1 - out[i]);
  return MadicNumber::from_digits(m, x.valuation(), std::move(out));
}

MadicNumber subtract(const MadicNumber& x, const MadicNumber& y) {
  return add(x, negate(y));
}

MadicNumber mul(const MadicNumber& x, const MadicNumber& y) {
  require_same_base(x, y);
  const int m = x.base();
  if (x.is_exact_zero() || y.is_exact_zero()) return MadicNumber::zero(m);
  // An approximate zero reports its absolute precision as valuation, so the
  // product is known to vanish below the sum of the two.
  if (x.is_zero() || y.is_zero())
    return MadicNumber::approx_zero(m, x.valuation() + y.valuation());

  const auto dx = x.digits();
  const auto dy = y.digits();
  const std::size_t n = std::min(dx.size(), dy.size());
  std::vector<std::uint64_t> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (dx[i] == 0) continue;
    for (std::size_t j = 0; i + j < n; ++j) acc[i + j] += std::uint64_t{dx[i]} * dy[j];
  }
  std::vector<std::uint8_t> out(n);
  std::uint64_t carry = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t s = acc[k] + carry;
    out[k] = static_cast<std::uint8_t>(s % static_cast<std::uint64_t>(m));
    carry = s / static_cast<std::uint64_t>(m);
  }
  return MadicNumber::from_digits(m, x.valuation() + y.valuation(), std::move(out));
}

MadicNumber inverse(const MadicNumber& x) {
  const int m = x.base();
  if (x.is_zero()) throw DomainError("inverse of zero");
  const auto d = x.digits();
  const int inv0 = mod_inverse(d[0], m);
  if (inv0 < 0)
    throw DomainError(fmt::format("leading digit {} is not a unit modulo {}", d[0], m));

  // Digit lifting: choose z_k so that the residual 1 - u*z vanishes up to m^k.
  const std::size_t n = d.size();
  std::vector<std::int64_t> r(n, 0);
  r[0] = 1;
  std::vector<std::uint8_t> z(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::int64_t rk = ((r[k] % m) + m) % m;
    int zk = static_cast<int>((rk * inv0) % m);
    z[k] = static_cast<std::uint8_t>(zk);
    for (std::size_t i = 0; k + i < n; ++i) r[k + i] -= static_cast<std::int64_t>(zk) * d[i];
    for (std::size_t i = k; i + 1 < n; ++i) {
      std::int64_t q = r[i] >= 0 ? r[i] / m : -((-r[i] + m - 1) / m);
      r[i] -= q * m;
      r[i + 1] += q;
    }
  }
  return MadicNumber::from_digits(m, -x.valuation(), std::move(z));
}

MadicNumber divide(const MadicNumber& x, const MadicNumber& y) {
  require_same_base(x, y);
  return mul(x, inverse(y));
}

double distance(const MadicNumber& x, const MadicNumber& y) {
  return subtract(x, y).pseudonorm();
}

Fraction fractional_part(const MadicNumber& x) {
  if (x.is_exact_zero()) return {};
  const int m = x.base();
  if (x.absolute_precision() < 0)
    throw PrecisionError(fmt::format(
        "fractional part needs digits down from position -1, known only below {}",
        x.absolute_precision()));
  if (x.is_zero() || x.valuation() >= 0) return {};

  const int v = x.valuation();
  u128 num = 0;
  u128 den = 1;  // m^(p - v) while accumulating, m^(-v) at the end
  for (int p = v; p <= -1; ++p) {
    num += static_cast<u128>(x.digit(p)) * den;
    den *= static_cast<u128>(m);
    if (den > std::numeric_limits<std::uint64_t>::max())
      throw DomainError("fractional part denominator exceeds 64 bits");
  }
  auto n64 = static_cast<std::uint64_t>(num);
  auto d64 = static_cast<std::uint64_t>(den);
  std::uint64_t g = std::gcd(n64, d64);
  return {n64 / g, d64 / g};
}

UnitComplex character(const MadicNumber& k, const MadicNumber& x) {
  Fraction f = fractional_part(mul(k, x));
  return UnitComplex(f.num, f.den);
}

}  // namespace madic
