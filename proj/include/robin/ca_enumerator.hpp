#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "robin/interval.hpp"
#include "robin/primes.hpp"
#include "robin/robin_core.hpp"

namespace robin {

/// Exact sigma(p^(a+1)) / (p sigma(p^a)) = (p^(a+2) - 1) / (p^(a+2) - p).
mpq_class step_ratio(std::uint64_t p, std::uint32_t a);

/**
 * Gain in log(sigma(n)/n) per unit of log n when the exponent of p goes
 * from a to a + 1:  log(sigma(p^(a+1)) / (p sigma(p^a))) / log p.
 * The greedy order of these values generates the colossally abundant numbers.
 */
Interval benefit(std::uint64_t p, std::uint32_t a, Precision prec = kDefaultPrecision);

/**
 * A colossally abundant number n = prod p_i^(a_i) over the first k primes,
 * with log n and log(sigma(n)/n) carried as enclosures and a frontier of
 * candidate next steps ordered by benefit.
 */
class CaState {
 public:
  /// n = 1.
  explicit CaState(Precision prec = kDefaultPrecision);

  Precision precision() const noexcept { return precision_; }
  std::uint64_t steps() const noexcept { return steps_; }
  /// The first k primes; exponents()[i] belongs to primes()[i].
  std::span<const std::uint64_t> primes() const noexcept { return primes_; }
  std::span<const std::uint32_t> exponents() const noexcept { return exponents_; }
  std::uint64_t next_fresh_prime() const noexcept { return fresh_; }
  const Interval& log_n() const noexcept { return log_n_; }
  const Interval& log_sigma_ratio() const noexcept { return log_sigma_ratio_; }

  Factorization factorization() const;
  /// n itself; only sensible while n is small.
  mpz_class value() const;

  /// Recomputes log n and log(sigma(n)/n) from the exponents at a new precision.
  void recompute_logs(Precision prec);

  /// Structural check: exponents non-increasing and at least 1.  StructureError otherwise.
  void validate() const;

  /// Rebuilds a state from its exponents on the first primes (used by checkpoint loading).
  static CaState from_exponents(std::vector<std::uint32_t> exponents, std::uint64_t steps, Precision prec);

 private:
  struct Candidate {
    Interval value;
    std::size_t index;  ///< into primes_, or primes_.size() for the fresh prime
  };
  struct ByUpper {
    bool operator()(const Candidate& a, const Candidate& b) const;
  };

  void admit(std::size_t index);
  Candidate make_candidate(std::size_t index, Precision prec) const;
  std::uint64_t prime_at(std::size_t index) const;
  std::uint32_t exponent_at(std::size_t index) const;

  friend struct CaStep next_step(CaState& state);

  Precision precision_;
  std::uint64_t steps_ = 0;
  std::vector<std::uint64_t> primes_;
  std::vector<std::uint32_t> exponents_;
  std::uint64_t fresh_ = 2;
  PrimeGenerator generator_;
  Interval log_n_;
  Interval log_sigma_ratio_;
  std::set<Candidate, ByUpper> frontier_;
};

struct CaStep {
  std::uint64_t prime = 0;
  std::uint32_t new_exponent = 0;
  /// The winning benefit and the runner-up it was proved larger than.
  Interval benefit;
  Interval runner_up;
  /// Highest precision the separation needed.
  Precision precision = 0;
};

/// Multiplies n by the prime of provably largest benefit.  Overlapping
/// candidates are re-evaluated at doubled precision (up to 16x); failing
/// that, PrecisionExhausted.
CaStep next_step(CaState& state);

/**
 * Robin's inequality in logarithmic form for the state:
 * log(sigma(n)/n) against gamma + log log log n.  DomainError unless log n > 1.
 */
RiVerdict check_ri_state(const CaState& state, const Interval& gamma);

/// q# raised to a multiplicity; the list is ordered by decreasing q.
struct PrimorialFactor {
  std::uint64_t top_prime;
  std::uint32_t multiplicity;

  friend bool operator==(const PrimorialFactor&, const PrimorialFactor&) = default;
};

struct PrimorialForm {
  std::vector<PrimorialFactor> factors;

  /// e.g. "44293#·3271#·(7#)^4·2^19"
  std::string to_string() const;
  /// Exponent of the i-th prime, i.e. the sum of multiplicities of q# with q >= p_i.
  std::vector<std::uint32_t> expand(std::span<const std::uint64_t> primes) const;
};

/// Multiplicity of p_i# is a_i - a_(i+1).  StructureError if the exponents
/// increase anywhere or the primes are not the first k primes.
PrimorialForm to_primorial_form(const Factorization& f);
PrimorialForm to_primorial_form(const CaState& state);

struct CaOptions {
  Precision precision = kDefaultPrecision;
  /// Written every checkpoint_every steps when non-empty.
  std::filesystem::path checkpoint_path;
  std::uint64_t checkpoint_every = 1'000'000;
};

struct CaReport {
  double target_log10_exponent = 0;
  std::uint64_t steps = 0;
  /// n <= 5040 that violate the inequality, in order of appearance.
  std::vector<std::uint64_t> small_violations;
  /// Violations (or undecidable states) above 5040; the run fails if any.
  std::uint64_t violations_above_5040 = 0;
  std::uint64_t first_violation_step = 0;
  /// States decided only after recomputing at a higher precision.
  std::uint64_t precision_retries = 0;
  /// Min over states with n > 5040 of (gamma + log log log n).lo - log(sigma(n)/n).hi.
  double min_log_margin = 0;
  std::uint64_t min_margin_step = 0;
  double final_log10_n = 0;
  std::uint64_t largest_prime = 0;
  double final_log_n_width = 0;
  std::string primorial_form;
  bool passed = false;
  double elapsed_seconds = 0;
};

/**
 * Steps from `state` until log10 n >= 10^target, checking Robin's inequality
 * at every state along the way.  RangeError if target < 1 (or so large that
 * 10^target overflows).  Propagates PrecisionExhausted.
 */
CaReport enumerate_until(CaState& state, double target_log10_exponent, const Interval& gamma,
                         const CaOptions& options = {});
/// From n = 1.
CaReport enumerate_until(double target_log10_exponent, const Interval& gamma, const CaOptions& options = {});

/// Versioned JSON: precision, step, exponents, and log enclosures as hex endpoints.
void save_checkpoint(const CaState& state, const std::filesystem::path& path);
/// Rebuilds the state from the stored exponents, recomputing the logarithms;
/// Error if the file is malformed or its stored enclosures disagree with them.
CaState load_checkpoint(const std::filesystem::path& path);

}  // namespace robin
