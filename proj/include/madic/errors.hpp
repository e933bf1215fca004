#pragma once

#include <stdexcept>
#include <string>

namespace madic {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in rings of different base m.
class BaseMismatch : public Error {
 public:
  using Error::Error;
};

/// Not enough known digits to determine the requested quantity.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A shell series whose terms do not decay under the declared tail policy.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the supported mathematical range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Coset grid larger than the configured cell limit.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant (mass, sandwich bound, residual) was violated.
class ToleranceError : public Error {
 public:
  ToleranceError(std::string quantity, double value, double limit)
      : Error(quantity + " = " + std::to_string(value) + " exceeds " +
              std::to_string(limit)),
        quantity_(std::move(quantity)),
        value_(value),
        limit_(limit) {}

  const std::string& quantity() const noexcept { return quantity_; }
  double value() const noexcept { return value_; }
  double limit() const noexcept { return limit_; }

 private:
  std::string quantity_;
  double value_;
  double limit_;
};

}  // namespace madic
