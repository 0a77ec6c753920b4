#pragma once

#include "robin/interval.hpp"

namespace robin {

Interval pi(Precision prec = kDefaultPrecision);

/// Euler-Mascheroni constant, correctly rounded outward (width one ulp).
Interval euler_gamma(Precision prec = kDefaultPrecision);

/// The two constants Robin's inequality consumes.
struct Constants {
  Interval gamma;
  Interval exp_gamma;
};

Constants make_constants(Precision prec = kDefaultPrecision);

/// Default cut-off of the explicit partial sum in zeta_int.
inline constexpr unsigned long kZetaTerms = 10'000;

/**
 * Rigorous enclosure of zeta(t) for integer t >= 2.
 *
 * Sums k^-t for k < terms at prec + 32 bits, then adds the Euler-Maclaurin
 * tail at k = terms with three Bernoulli corrections and the remainder
 * bound 2 zeta(7) / (2 pi)^7 |f^(6)(terms)|.  Throws DomainError for t < 2.
 */
Interval zeta_int(long t, Precision prec = kDefaultPrecision, unsigned long terms = kZetaTerms);

}  // namespace robin
