#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "robin/interval.hpp"

namespace robin {

/// Linear coefficient c in the denominator log(p - c p - 1.4262 sqrt(p)) of g_inf.
enum class GInfCoefficient {
  Proved,   ///< 1.388e-10, the value the theta estimate for log x >= 55 establishes
  Printed,  ///< 1.338e-10, the value printed in the g_inf display
};

/// Which C1 feeds g_B and the Mertens lower bound.
enum class C1Source {
  Stated,      ///< the constant 2.645e-9
  Recomputed,  ///< the enclosure produced by c1_certificate
};

/// Constants of the certification.
struct GParams {
  unsigned t = 20;
  std::string B = "2.169e25";
  std::string C1 = "2.645e-9";
  /// log X0; the C1 integral is split at X0 = exp(2000).
  long log_X0 = 2000;
  std::uint64_t switch_prime = 29'996'208'012'611ULL;
  Precision precision = kDefaultPrecision;
  GInfCoefficient g_inf_coefficient = GInfCoefficient::Proved;
  C1Source c1_source = C1Source::Stated;

  /// Throws DomainError for t < 2 or a malformed constant.
  void validate() const;
  Interval B_value() const;
  /// C1 as consumed by g_B, per c1_source.
  Interval C1_value() const;
};

const char* to_string(GInfCoefficient c) noexcept;
const char* to_string(C1Source s) noexcept;

/// The majorant of C1, split at X0.
struct C1Certificate {
  /// 1.430e-10 (log log X0 - log log B)
  Interval piece1;
  /// 30.3 * integral_{X0}^inf log t exp(-0.8 sqrt(log t)) / t dt, in closed form.
  Interval piece2;
  Interval total;
  /// 1.405e-10 (1 + 1 / log B) <= 1.430e-10, which licenses the first piece.
  bool split_constant_ok = false;
  /// 4.92 sqrt(B / log B) <= 3e12, the height to which the zeros are known.
  bool zero_height_ok = false;
  /// total.hi <= 2.645e-9
  bool within_stated = false;
};

C1Certificate c1_certificate(const GParams& params = {});

/**
 * (e^-gamma / log x) exp(-eps(x)) with
 *   eps(x) = 1.02/((x-1) log x) + log x/(8 pi sqrt x) + C1
 *          + ((log x + 3) sqrt B - (log B + 3) sqrt x) / (4 pi sqrt(x B)),
 * a lower bound for prod_{p <= x} (1 - 1/p) on 599 <= x <= B.  RangeError
 * outside that range.
 */
Interval mertens_lower_rhs(const Interval& x, const GParams& params = {});

/// exp(2/p), which bounds prod_{q > p} (1 - q^-t)^-1; DomainError for p <= 0.
Interval tail_factor(const Interval& p);

/**
 * g_B(p; t) = exp(2/p + eps(p)) log p / (zeta(t) log(p - sqrt(p) log^2 p / (8 pi)))
 * for 599 <= p <= B.  RangeError outside that range, DomainError if the
 * inner logarithm's argument is not provably positive.
 */
Interval g_B(const Interval& p, unsigned t, const GParams& params = {});

/**
 * g_inf(p; t) = exp(2/p + 1.02/((p-1) log p) + 1/(6 log^3 p) + 5/(8 log^4 p)) log p
 *               / (zeta(t) log(p - c p - 1.4262 sqrt p)),
 * for log p >= 55; RangeError otherwise.
 */
Interval g_inf(const Interval& p, unsigned t, const GParams& params = {});

/// e^gamma log x exp(1.02/((x-1) log x) + 1/(6 log^3 x) + 5/(8 log^4 x)), x >= 767135587.
Interval mertens_upper_rhs(const Interval& x, const GParams& params = {});

struct CertResult {
  unsigned t = 0;
  Interval g_B_value;
  Interval g_inf_value;
  Verdict g_B_verdict = Verdict::Indeterminate;
  Verdict g_inf_verdict = Verdict::Indeterminate;
  /// Proved iff both upper ends are below 1; Failed iff either lower end is above 1.
  Verdict passed = Verdict::Indeterminate;
  /// 1 - hi for each function (positive when proved).
  double margin_B = 0;
  double margin_inf = 0;
  /// Precision of the final evaluation (doubled once when the first is inconclusive).
  Precision precision = 0;
};

/// g_B(switch_prime; t) and g_inf(B; t) against 1.  DomainError for t < 2.
CertResult certify_t(unsigned t, const GParams& params = {});

struct MaxTResult {
  /// Largest certified t, or 0 if t = 2 already fails.
  unsigned t_star = 0;
  /// Every certification attempted, in increasing t; the last is the first non-proof.
  std::vector<CertResult> scanned;
};

/// Largest t with certify_t(t) = Proved, scanning upward from 2.
MaxTResult max_certifiable_t(const GParams& params = {});

enum class GFunction { B, Inf };

struct GTableRow {
  Interval p;
  Interval g;
};

/**
 * g on a geometric grid of `points` values: [599, B] for GFunction::B and
 * [e^55, 10 B] for GFunction::Inf.  RangeError if points < 2.
 */
std::vector<GTableRow> g_table(GFunction which, unsigned t, std::size_t points, const GParams& params = {});

/// Consecutive rows never provably increase; the count of provable decreases is reported.
struct MonotonicityReport {
  std::size_t pairs = 0;
  std::size_t proved_decreasing = 0;
  std::size_t increases = 0;
  bool non_increasing = false;
};

MonotonicityReport check_non_increasing(std::span<const GTableRow> rows);

/// One comparison of a sieved Mertens product against its explicit bound.
struct MertensPoint {
  std::uint64_t x = 0;
  Interval product;  ///< prod (1 - 1/p) for the lower bound, prod p/(p-1) for the upper
  Interval bound;
  bool holds = false;
  /// Relative gap between product and bound (positive when the bound holds).
  double relative_margin = 0;
};

struct MertensCheckReport {
  std::vector<MertensPoint> points;
  bool passed = false;
};

/// prod_{p <= x} (1 - 1/p) >= mertens_lower_rhs(x) at every x (each in [599, B]).
MertensCheckReport mertens_lower_check(std::span<const std::uint64_t> xs, const GParams& params = {});

/// prod_{p <= x} p / (p - 1) <= mertens_upper_rhs(x) at every x (each >= 767135587).
MertensCheckReport mertens_upper_check(std::span<const std::uint64_t> xs, const GParams& params = {});

struct BoundChainReport {
  unsigned t = 0;
  std::uint64_t p_min = 0;
  std::uint64_t p_max = 0;
  std::uint64_t primes_checked = 0;
  std::uint64_t violations = 0;
  std::uint64_t first_violation = 0;
  /// min over p of (g_B.lo - e^-gamma R_t.hi) / g_B.lo
  double min_relative_margin = 0;
  std::uint64_t min_margin_at = 0;
  bool passed = false;
  double elapsed_seconds = 0;
};

/**
 * e^-gamma R_t(p_n#) <= g_B(p_n; t) for every prime p_n in [p_min, p_max],
 * streaming theta and the Mertens product from 2.  Each comparison must be
 * proved (upper end of the left side below the lower end of g_B).
 * RangeError unless 599 <= p_min <= p_max <= B.
 */
BoundChainReport bound_chain_check(unsigned t, std::uint64_t p_min, std::uint64_t p_max,
                                   const GParams& params = {});

}  // namespace robin
