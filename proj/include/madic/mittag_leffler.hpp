#pragma once

// One-parameter Mittag-Leffler function E_beta(z) = sum z^n / Gamma(beta n + 1)
// on the nonpositive real axis, 0 < beta <= 1.

namespace madic {

/// E_beta(z) for z <= 0. Throws DomainError for beta outside (0, 1] or z > 0.
double mittag_leffler(double beta, double z);

/// 1 - E_beta(-y) for y >= 0, accurate when the result is small.
double mittag_leffler_complement(double beta, double y);

/// Which evaluation path mittag_leffler takes for E_beta(-y); exposed so the
/// tests can cover each region.
enum class MittagLefflerMethod { exact, series, integral, asymptotic };
MittagLefflerMethod mittag_leffler_method(double beta, double y);

}  // namespace madic
