#pragma once

#include <cstddef>
#include <cstdint>

// Randomized property suites shared by the unit tests and the acceptance run.
namespace robin::properties {

struct SuiteResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  bool passed() const { return cases > 0 && failures == 0; }
};

/// Random rational operands; each 100-bit interval operation must contain the
/// 256-bit round-to-nearest reference.  Runs until `cases` operations are checked.
SuiteResult interval_soundness(std::size_t cases, std::uint64_t seed);

/// sigma(n) <= Psi_t(n) for random t-free factorizations over the primes below 50.
SuiteResult sigma_below_psi(std::size_t cases, std::uint64_t seed);

/// expand(to_primorial_form(e)) == e for random non-increasing exponent vectors.
SuiteResult primorial_round_trip(std::size_t states, std::uint64_t seed);

/// g_B on [599, B] and g_inf on [e^55, 10 B] never provably increase along a
/// geometric grid of `points` values; cases counts the compared pairs.
SuiteResult g_non_increasing(std::size_t points, unsigned t);

}  // namespace robin::properties
