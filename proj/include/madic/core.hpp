#pragma once

// Truncated m-adic numbers: x = sum_{i >= v} a_i m^i with a finite number of
// known digits, plus the pseudonorm, the fractional part and the additive
// character chi_m(x) = exp(2 pi i {x}).

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "madic/errors.hpp"

namespace madic {

inline constexpr int kDefaultPrecision = 48;
inline constexpr int kMaxBase = 36;

/// Throws DomainError unless 2 <= m <= kMaxBase.
void check_base(int m);

/// m^e as a double. Exact whenever the result is representable.
double mpow(int m, int e);

/// Pseudonorm value m^e, or exact zero. Used wherever only |k|_m matters.
class Norm {
 public:
  static constexpr Norm zero() noexcept { return Norm{}; }
  static constexpr Norm power(int exponent) noexcept { return Norm{exponent}; }

  constexpr bool is_zero() const noexcept { return !exponent_.has_value(); }
  /// Exponent e with |k|_m = m^e. Precondition: !is_zero().
  constexpr int exponent() const { return exponent_.value(); }
  double value(int m) const { return is_zero() ? 0.0 : mpow(m, *exponent_); }

  /// |k|_m <= m^e
  constexpr bool at_most(int e) const noexcept {
    return is_zero() || *exponent_ <= e;
  }

  friend constexpr bool operator==(const Norm&, const Norm&) = default;

 private:
  constexpr Norm() = default;
  constexpr explicit Norm(int e) : exponent_(e) {}
  std::optional<int> exponent_;
};

/// A phase exp(2 pi i num/den) held as an exact reduced fraction in [0, 1).
/// The denominator always divides some power of the base.
class UnitComplex {
 public:
  UnitComplex() = default;
  /// Reduces num/den modulo 1 and to lowest terms.
  UnitComplex(std::uint64_t num, std::uint64_t den);

  static UnitComplex one() { return {}; }

  std::uint64_t numerator() const noexcept { return num_; }
  std::uint64_t denominator() const noexcept { return den_; }
  /// Angle in turns, in [0, 1).
  double turns() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  std::complex<double> value() const;

  UnitComplex conj() const;
  friend UnitComplex operator*(const UnitComplex& a, const UnitComplex& b);
  friend bool operator==(const UnitComplex&, const UnitComplex&) = default;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// Element of Q_m known to a finite number of digits.
///
/// Three states are distinguished: exact zero, "zero at precision A" (every
/// known digit below m^A vanished, typically through cancellation), and a
/// nonzero value whose lowest digit a_v is nonzero. For nonzero values the
/// digits a_v .. a_{v+N-1} are known, N being the relative precision; the
/// absolute precision v + N is the first unknown position.
class MadicNumber {
 public:
  enum class State : std::uint8_t { exact_zero, approx_zero, nonzero };

  static MadicNumber zero(int m);
  static MadicNumber approx_zero(int m, int absolute_precision);
  /// Base-m expansion of n (negative n via complement), N digits.
  static MadicNumber from_integer(std::int64_t n, int m,
                                  int precision = kDefaultPrecision);
  /// digits[i] is the coefficient of m^(valuation + i). Leading zero digits
  /// are stripped, so the result's valuation may exceed `valuation`.
  static MadicNumber from_digits(int m, int valuation,
                                 std::vector<std::uint8_t> digits);
  /// m^e with N known digits.
  static MadicNumber power_of_base(int m, int e,
                                   int precision = kDefaultPrecision);
  /// Parses the text form produced by to_string().
  static MadicNumber parse(std::string_view text);

  int base() const noexcept { return m_; }
  State state() const noexcept { return state_; }
  bool is_zero() const noexcept { return state_ != State::nonzero; }
  bool is_exact_zero() const noexcept { return state_ == State::exact_zero; }

  /// Index of the lowest nonzero digit. For approximate zeros this is the
  /// absolute precision (a lower bound); exact zero reports int max.
  int valuation() const noexcept;
  /// Relative precision N (number of stored digits).
  int precision() const noexcept { return static_cast<int>(digits_.size()); }
  /// First digit position that is not known; int max for exact zero.
  int absolute_precision() const noexcept;
  std::span<const std::uint8_t> digits() const noexcept { return digits_; }
  /// Digit at `position`; throws PrecisionError past the known digits.
  int digit(int position) const;

  /// |x|_m = m^{-v}; zero for both kinds of zero.
  double pseudonorm() const noexcept;
  /// |x|_m as an exact power, zero for both kinds of zero.
  Norm norm() const noexcept;

  /// x * m^e, exact.
  MadicNumber shifted(int e) const;
  /// Keeps at most `precision` digits.
  MadicNumber truncated(int precision) const;

  /// "...d_k..d_1d_0.d_-1..d_v (base m)"; exact zero prints as "0 (base m)".
  std::string to_string() const;

  friend bool operator==(const MadicNumber&, const MadicNumber&) = default;

 private:
  MadicNumber(int m, State s, int v, std::vector<std::uint8_t> d)
      : m_(m), state_(s), valuation_(v), digits_(std::move(d)) {}

  int m_ = 2;
  State state_ = State::exact_zero;
  // For approx_zero this holds the absolute precision.
  int valuation_ = 0;
  std::vector<std::uint8_t> digits_;
};

MadicNumber add(const MadicNumber& x, const MadicNumber& y);
MadicNumber negate(const MadicNumber& x);
MadicNumber subtract(const MadicNumber& x, const MadicNumber& y);
MadicNumber mul(const MadicNumber& x, const MadicNumber& y);
/// Multiplicative inverse; requires the leading digit to be coprime to m.
MadicNumber inverse(const MadicNumber& x);
MadicNumber divide(const MadicNumber& x, const MadicNumber& y);

inline MadicNumber operator+(const MadicNumber& x, const MadicNumber& y) {
  return add(x, y);
}
inline MadicNumber operator-(const MadicNumber& x) { return negate(x); }
inline MadicNumber operator-(const MadicNumber& x, const MadicNumber& y) {
  return subtract(x, y);
}
inline MadicNumber operator*(const MadicNumber& x, const MadicNumber& y) {
  return mul(x, y);
}

inline double pseudonorm(const MadicNumber& x) { return x.pseudonorm(); }
double distance(const MadicNumber& x, const MadicNumber& y);

/// {x} as an exact fraction num/den, den dividing a power of m.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Fractional part {x} = sum_{i=v}^{-1} a_i m^i. Throws PrecisionError when
/// a digit below m^0 is unknown.
Fraction fractional_part(const MadicNumber& x);
/// chi_m(kx) = exp(2 pi i {kx}).
UnitComplex character(const MadicNumber& k, const MadicNumber& x);

}  // namespace madic
