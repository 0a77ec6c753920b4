#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "robin/interval.hpp"

namespace robin {

struct SieveOptions {
  /// Positions (integers) covered by one sieve segment.
  std::uint64_t segment_size = std::uint64_t{1} << 24;
  /// Upper bound on the bytes a PrimeTable may hold.
  std::size_t memory_budget = std::size_t{1} << 30;
  /// Precision of the cached theta / Mertens prefix enclosures.
  Precision precision = kDefaultPrecision;
};

/**
 * Calls `fn(p)` for every prime lo <= p <= hi, in increasing order, using a
 * segmented sieve of Eratosthenes over odd numbers.  Memory is
 * O(sqrt(hi) + segment_size) so ranges well past 10^10 can be streamed.
 */
void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& fn,
                    std::uint64_t segment_size = std::uint64_t{1} << 24);

/// Unbounded increasing prime source; sieves one segment at a time.
class PrimeGenerator {
 public:
  explicit PrimeGenerator(std::uint64_t start = 2, std::uint64_t segment_size = std::uint64_t{1} << 20);
  std::uint64_t next();

 private:
  void refill();

  std::uint64_t segment_size_;
  std::uint64_t next_lo_;
  std::vector<std::uint64_t> buffer_;
  std::size_t pos_ = 0;
};

/**
 * All primes up to `limit`, with theta(p) = sum_{q <= p} log q and the
 * Mertens product prod_{q <= p} q / (q - 1) available as enclosures at any
 * prime.  Prefix enclosures are kept at every kCheckpointStride-th prime and
 * built on first use; the table is otherwise immutable and thread-safe.
 */
class PrimeTable {
 public:
  static constexpr std::size_t kCheckpointStride = 1024;

  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes, Precision prec);
  PrimeTable(PrimeTable&&) noexcept;
  PrimeTable& operator=(PrimeTable&&) noexcept;
  ~PrimeTable();

  std::uint64_t limit() const noexcept { return limit_; }
  Precision precision() const noexcept { return precision_; }
  std::span<const std::uint64_t> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  /// pi(x) for x <= limit.
  std::size_t count_upto(std::uint64_t x) const;

  /// Enclosure of sum_{i <= index} log(primes[index]) (0-based).
  Interval theta_prefix(std::size_t index) const;
  /// Enclosure of prod_{i <= index} p_i / (p_i - 1) (0-based).
  Interval mertens_prefix(std::size_t index) const;

 private:
  struct Prefixes;
  const Prefixes& prefixes() const;

  std::uint64_t limit_;
  std::vector<std::uint64_t> primes_;
  Precision precision_;
  std::unique_ptr<Prefixes> prefixes_;
};

/// Complete table of primes <= limit; ResourceError past the memory budget.
PrimeTable sieve(std::uint64_t limit, const SieveOptions& options = {});

/// Rough upper estimate of the bytes sieve(limit) will hold.
std::size_t estimated_table_bytes(std::uint64_t limit);

/// theta(x) = sum_{p <= x} log p; OutOfRange if x > table.limit().
Interval theta(std::uint64_t x, const PrimeTable& table);

/// log(p_n#) for the 1-based index n; n = 0 gives the empty product.
Interval primorial_log(std::size_t n, const PrimeTable& table);

/// prod_{p <= x} (1 - 1/p)^-1; OutOfRange if x > table.limit().
Interval mertens_product(std::uint64_t x, const PrimeTable& table);

/// prod_{p <= x} p / (p - 1) by streaming the sieve; no table is kept.
Interval mertens_product_streamed(std::uint64_t x, Precision prec = kDefaultPrecision);
/// The same product at several x (any order) in one pass of the sieve.
std::vector<Interval> mertens_products_streamed(std::span<const std::uint64_t> xs,
                                                Precision prec = kDefaultPrecision);

/// Right side of |theta(x) - x| <= sqrt(x) log^2(x) / (8 pi).
Interval theta_error_bound(const Interval& x);

/// Outcome of theta_bound_check.
struct ThetaCheckReport {
  std::uint64_t x_min = 0;
  std::uint64_t x_max = 0;
  std::uint64_t points_checked = 0;
  std::uint64_t violations = 0;
  std::uint64_t first_violation = 0;
  /// min over checked points of bound - |theta(x) - x| (approximate, for reporting).
  double min_slack = 0;
  std::uint64_t min_slack_at = 0;
  /// min of (bound - |theta - x|) / bound.
  double min_relative_slack = 0;
  std::uint64_t min_relative_slack_at = 0;
  /// Points where the quick double-precision screen was too close and the
  /// full interval evaluation decided.
  std::uint64_t interval_fallbacks = 0;
  bool passed = false;
};

/**
 * Checks |theta(x) - x| <= sqrt(x) log^2 x / (8 pi) on [x_min, x_max].
 *
 * theta(x) - x peaks just at primes and x - theta(x) just below them, so the
 * check visits each prime p (both theta(p) - p and p - theta(p-)) and the
 * two endpoints.  RangeError if x_min < 599 or x_min >= x_max; OutOfRange
 * if x_max exceeds the table.
 */
ThetaCheckReport theta_bound_check(std::uint64_t x_min, std::uint64_t x_max, const PrimeTable& table);

/// Writes the table as a versioned binary file (magic, limit, count, checksum).
void save_prime_cache(const PrimeTable& table, const std::filesystem::path& path);
/// Reads a file written by save_prime_cache; throws Error on any mismatch.
PrimeTable load_prime_cache(const std::filesystem::path& path, Precision prec = kDefaultPrecision);

}  // namespace robin
