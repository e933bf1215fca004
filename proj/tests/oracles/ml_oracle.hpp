#pragma once

// Extended-precision E_beta(-y) with MPFR. The power series is summed in
// enough digits to absorb its cancellation while y^{1/beta} <= 300; beyond
// that the inverse-power expansion is summed in high precision, where its
// optimal truncation error exp(-y^{1/beta}) lies below 1e-130.

#include <cmath>
#include <limits>

#include <boost/multiprecision/mpfr.hpp>

namespace oracle {

using mp = boost::multiprecision::mpfr_float;

inline double mittag_leffler(double beta, double y) {
  if (y == 0.0) return 1.0;
  const double span = std::pow(y, 1.0 / beta);
  if (beta == 1.0) {
    mp::default_precision(60);
    return boost::multiprecision::exp(-mp(y)).convert_to<double>();
  }
  if (span <= 300.0) {
    mp::default_precision(40 + static_cast<unsigned>(span / 2.3));
    const mp z = -mp(y);
    const mp b = mp(beta);
    mp sum = 0, power = 1;
    for (int n = 0;; ++n) {
      const mp term = power / boost::multiprecision::tgamma(b * n + 1);
      sum += term;
      if (n > 10 && abs(term) < abs(sum) * mp("1e-35")) break;
      power *= z;
    }
    return sum.convert_to<double>();
  }
  mp::default_precision(60);
  const mp b = mp(beta);
  const mp yy = mp(y);
  const mp pi = boost::multiprecision::mpfr_float::default_precision() > 0
                    ? boost::math::constants::pi<mp>()
                    : mp(0);
  mp sum = 0, previous = std::numeric_limits<double>::infinity();
  mp power = 1;
  for (int k = 1; k < 100000; ++k) {
    power /= yy;
    // 1/Gamma(1 - beta k) = Gamma(beta k) sin(pi beta k) / pi
    const mp g = b * k;
    const mp envelope = boost::multiprecision::tgamma(g) * power;
    if (envelope > previous) break;
    previous = envelope;
    const mp term = envelope * sin(pi * g) / pi;
    sum += (k % 2 == 1) ? term : mp(-term);
    if (envelope < abs(sum) * mp("1e-40")) break;
  }
  return sum.convert_to<double>();
}

}  // namespace oracle
