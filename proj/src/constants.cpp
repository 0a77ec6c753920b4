#include "robin/constants.hpp"

#include <array>

#include "robin/error.hpp"

namespace robin {

Interval pi(Precision prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval euler_gamma(Precision prec) {
  Interval r(prec);
  mpfr_const_euler(r.lo_, MPFR_RNDD);
  mpfr_const_euler(r.hi_, MPFR_RNDU);
  return r;
}

Constants make_constants(Precision prec) {
  Interval gamma = euler_gamma(prec);
  Interval eg = exp(gamma);
  return Constants{std::move(gamma), std::move(eg)};
}

Interval zeta_int(long t, Precision prec, unsigned long terms) {
  if (t < 2) throw DomainError("zeta_int: t must be >= 2");
  if (terms < 2) throw DomainError("zeta_int: need at least two explicit terms");
  const Precision work = prec + 32;
  const auto exponent = static_cast<unsigned long>(t);

  Interval sum(0L, work);
  const Interval one(1L, work);
  for (unsigned long k = 1; k < terms; ++k) {
    sum += one / pow(Interval::from_uint(k, work), exponent);
  }

  // Euler-Maclaurin tail of sum_{k >= N} k^-t.
  const Interval n = Interval::from_uint(terms, work);
  const Interval n_pow = pow(n, exponent);  // N^t
  Interval tail = n / (n_pow * static_cast<unsigned long>(t - 1));  // N^(1-t)/(t-1)
  tail += one / (n_pow * 2UL);                                     // f(N)/2

  // B_2j / (2j)! for j = 1, 2, 3.
  const std::array<Interval, 3> bernoulli_coeffs = {
      Interval(1L, work) / 12UL,
      -(Interval(1L, work) / 720UL),
      Interval(1L, work) / 30240UL,
  };
  Interval rising = Interval::from_uint(exponent, work);  // (t)_1
  Interval n_power = n_pow * n;                           // N^(t+1)
  for (std::size_t j = 0; j < bernoulli_coeffs.size(); ++j) {
    tail += bernoulli_coeffs[j] * rising / n_power;
    const unsigned long base = exponent + 2 * j + 1;
    rising *= Interval::from_uint(base, work) * Interval::from_uint(base + 1, work);
    n_power *= n * n;
  }
  // rising = (t)_7 and n_power = N^(t+7); remainder uses (t)_6 N^-(t+6).
  const Interval rising6 = rising / (exponent + 6);
  const Interval n_power6 = n_power / n;
  const Interval two_pi_7 = pow(pi(work) * 2UL, 7);
  const Interval remainder_bound =
      Interval::from_decimal("2.02", work) * rising6 / (two_pi_7 * n_power6);
  tail += hull(-remainder_bound, remainder_bound);

  sum += tail;
  return sum.with_precision(prec);
}

}  // namespace robin
