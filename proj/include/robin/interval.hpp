#pragma once

// stdint before mpfr.h enables the intmax_t entry points (mpfr_set_uj, ...).
#include <stdint.h>
#include <mpfr.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace robin {

using Precision = mpfr_prec_t;

/// Working precision used unless a caller asks for more.
inline constexpr Precision kDefaultPrecision = 100;

/**
 * Closed interval [lo, hi] with MPFR endpoints.
 *
 * Every operation rounds the lower endpoint down and the upper endpoint up,
 * so if x lies in X and y lies in Y then x op y lies in X op Y.  Binary
 * operations work at the larger of the two operand precisions.
 *
 * Values are self-contained (each owns its limbs) and may be shared
 * read-only between threads.
 */
class Interval {
 public:
  /// The point interval [0, 0].
  explicit Interval(Precision prec = kDefaultPrecision);
  /// Point interval at an integer; exact whenever |v| fits in prec bits.
  Interval(long v, Precision prec);

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval from_uint(std::uint64_t v, Precision prec = kDefaultPrecision);
  static Interval from_mpz(const mpz_class& v, Precision prec = kDefaultPrecision);
  static Interval from_rational(const mpq_class& q, Precision prec = kDefaultPrecision);
  /// Exact binary value of a double.
  static Interval from_double(double v, Precision prec = kDefaultPrecision);
  /// Outward-rounded enclosure of a decimal literal such as "2.169e25".
  static Interval from_decimal(std::string_view text, Precision prec = kDefaultPrecision);
  /// [lo, hi] from two doubles; throws DomainError if lo > hi.
  static Interval hull(double lo, double hi, Precision prec = kDefaultPrecision);
  /// [lo, hi] from raw MPFR endpoints, rounded outward to prec.
  static Interval from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, Precision prec);
  /// Parses endpoints written by lower_hex() / upper_hex().
  static Interval from_hex(std::string_view lo, std::string_view hi, Precision prec);

  Precision precision() const noexcept { return mpfr_get_prec(lo_); }
  mpfr_srcptr lower() const noexcept { return lo_; }
  mpfr_srcptr upper() const noexcept { return hi_; }

  /// Lower endpoint rounded down to double.
  double lo() const noexcept;
  /// Upper endpoint rounded up to double.
  double hi() const noexcept;
  /// Midpoint rounded to nearest double; for display and ordering heuristics only.
  double mid() const noexcept;
  /// hi - lo, rounded up.
  double width() const noexcept;

  bool contains(double v) const noexcept;
  bool contains(const Interval& inner) const noexcept;
  bool contains_zero() const noexcept;
  /// lo > 0
  bool is_positive() const noexcept;

  /// Same enclosure re-rounded outward to a new precision.
  Interval with_precision(Precision prec) const;

  Interval& operator+=(const Interval& rhs);
  Interval& operator-=(const Interval& rhs);
  Interval& operator*=(const Interval& rhs);
  Interval& operator/=(const Interval& rhs);
  Interval& operator*=(unsigned long rhs);
  Interval& operator/=(unsigned long rhs);

  /// "[lo, hi]" with `digits` significant decimal digits, rounded outward.
  std::string to_string(int digits = 20) const;
  std::string lower_decimal(int digits = 25) const;
  std::string upper_decimal(int digits = 25) const;
  /// Exact hexadecimal endpoints ("0x1.8p+1" style) for checkpoints.
  std::string lower_hex() const;
  std::string upper_hex() const;

 private:
  friend Interval operator-(const Interval& x);
  friend Interval log(const Interval& x);
  friend Interval log1p(const Interval& x);
  friend Interval exp(const Interval& x);
  friend Interval sqrt(const Interval& x);
  friend Interval pow(const Interval& x, unsigned long n);
  friend Interval hull(const Interval& a, const Interval& b);
  friend Interval pi(Precision prec);
  friend Interval euler_gamma(Precision prec);
  friend Interval log_of_uint(std::uint64_t v, Precision prec);

  mpfr_t lo_;
  mpfr_t hi_;
};

Interval operator+(Interval a, const Interval& b);
Interval operator-(Interval a, const Interval& b);
Interval operator*(Interval a, const Interval& b);
Interval operator/(Interval a, const Interval& b);
Interval operator*(Interval a, unsigned long b);
Interval operator/(Interval a, unsigned long b);
Interval operator-(const Interval& x);

Interval log(const Interval& x);
/// log(1 + x); keeps relative accuracy for tiny x.
Interval log1p(const Interval& x);
Interval exp(const Interval& x);
Interval sqrt(const Interval& x);
Interval pow(const Interval& x, unsigned long n);
/// x^y for x > 0, as exp(y log x).
Interval pow(const Interval& x, const Interval& y);
Interval square(const Interval& x);
/// Smallest interval containing both arguments.
Interval hull(const Interval& a, const Interval& b);

/// Enclosure of log(v) for a positive integer.
Interval log_of_uint(std::uint64_t v, Precision prec = kDefaultPrecision);

/// a.hi < b.lo
bool proved_less(const Interval& a, const Interval& b);
/// a.lo > b.hi
bool proved_greater(const Interval& a, const Interval& b);
bool proved_less(const Interval& a, double b);
bool proved_greater(const Interval& a, double b);

/// Outcome of comparing an enclosure against a threshold.
enum class Verdict { Proved, Failed, Indeterminate };

/// Proved if x.hi < bound, Failed if x.lo > bound, Indeterminate otherwise.
Verdict verdict_below(const Interval& x, double bound);
const char* to_string(Verdict v) noexcept;

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace robin
