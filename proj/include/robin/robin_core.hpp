#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "robin/interval.hpp"
#include "robin/primes.hpp"

namespace robin {

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical factorization: primes strictly increasing, every exponent >= 1.
class Factorization {
 public:
  Factorization() = default;
  /// Validates ordering and exponents (primality of the bases is not re-checked).
  explicit Factorization(std::vector<PrimePower> terms);
  /// Trial division; n >= 1.
  static Factorization of(std::uint64_t n);

  std::span<const PrimePower> terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  mpz_class value() const;
  std::uint32_t max_exponent() const noexcept;

 private:
  std::vector<PrimePower> terms_;
};

/// Exact sigma(n) = prod (p^(a+1) - 1) / (p - 1).
mpz_class sigma(const Factorization& f);

/// No prime power p^t divides n.
bool is_t_free(const Factorization& f, unsigned t);

/// Psi_t(n) = n prod_{p | n} (1 + 1/p + ... + 1/p^(t-1)), exactly.
mpq_class psi_t(const Factorization& f, unsigned t);

enum class RiStatus { Holds, Violated, Indeterminate };
const char* to_string(RiStatus s) noexcept;

/// sigma(n) against e^gamma n log log n.
struct RiVerdict {
  Interval log_n;
  /// Enclosure of sigma(n) (or sigma(n)/n when only logarithms are tracked).
  Interval sigma_side;
  /// Enclosure of e^gamma n log log n (or gamma + log log log n in log form).
  Interval robin_side;
  RiStatus status = RiStatus::Indeterminate;
};

/// Robin's inequality for one n >= 3; DomainError for n <= 2.
RiVerdict ri_check(const Factorization& f, const Interval& gamma);

struct SmallScanReport {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> counterexamples;
  std::uint64_t max_counterexample = 0;
  /// False when limit < 5041, i.e. the scan cannot cover every known counterexample.
  bool complete = false;
  /// No counterexample above 5040.
  bool passed = false;
  /// Cases the double-precision screen left to interval arithmetic.
  std::uint64_t interval_checks = 0;
  double elapsed_seconds = 0;
};

struct SmallScanOptions {
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  std::size_t memory_budget = std::size_t{1} << 30;
  unsigned threads = 0;  ///< 0 means hardware concurrency
  Precision precision = kDefaultPrecision;
};

/**
 * Every n in [3, limit] with sigma(n) >= e^gamma n log log n.
 *
 * sigma is sieved exactly per segment from divisor pairs (d, n/d); a double
 * screen settles clear cases and ri_check decides the rest.  RangeError for
 * limit < 3, ResourceError when the segment buffers exceed the budget.
 */
SmallScanReport small_scan(std::uint64_t limit, const SmallScanOptions& options = {});

/// Exact sigma(n) for n in [lo, hi] by the divisor-pair sieve (lo >= 1).
std::vector<std::uint64_t> sigma_segment(std::uint64_t lo, std::uint64_t hi);

/**
 * R_t(p_n#) from its parts:
 *   tail * mertens / (zeta(t) log theta),  tail in [1, exp(2 / p_n)].
 */
Interval rt_from_parts(std::uint64_t p_n, const Interval& theta_pn, const Interval& mertens_pn,
                       const Interval& zeta_t);

/// Enclosure of R_t(p_n#) via the product formula; n is 1-based, n >= 2.
Interval rt_primorial(std::size_t n, unsigned t, const PrimeTable& table);

/// R_t(p_n#) = Psi_t(p_n#) / (p_n# log log p_n#) evaluated directly, no tail.
Interval rt_primorial_direct(std::size_t n, unsigned t, const PrimeTable& table);

}  // namespace robin
