#include "robin/robin_core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "robin/constants.hpp"
#include "robin/error.hpp"

namespace robin {

Factorization::Factorization(std::vector<PrimePower> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].exponent == 0) throw DomainError("Factorization: zero exponent");
    if (terms_[i].prime < 2) throw DomainError("Factorization: base below 2");
    if (i > 0 && terms_[i].prime <= terms_[i - 1].prime) {
      throw DomainError("Factorization: primes must be strictly increasing");
    }
  }
}

Factorization Factorization::of(std::uint64_t n) {
  if (n == 0) throw DomainError("Factorization::of: n must be >= 1");
  std::vector<PrimePower> terms;
  auto take = [&](std::uint64_t p) {
    std::uint32_t a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    if (a > 0) terms.push_back({p, a});
  };
  take(2);
  take(3);
  for (std::uint64_t d = 5; d * d <= n; d += 6) {
    take(d);
    take(d + 2);
  }
  if (n > 1) terms.push_back({n, 1});
  return Factorization(std::move(terms));
}

mpz_class Factorization::value() const {
  mpz_class n = 1;
  mpz_class pk;
  for (const auto& [p, a] : terms_) {
    mpz_ui_pow_ui(pk.get_mpz_t(), p, a);
    n *= pk;
  }
  return n;
}

std::uint32_t Factorization::max_exponent() const noexcept {
  std::uint32_t m = 0;
  for (const auto& t : terms_) m = std::max(m, t.exponent);
  return m;
}

mpz_class sigma(const Factorization& f) {
  mpz_class s = 1;
  mpz_class num;
  for (const auto& [p, a] : f.terms()) {
    mpz_ui_pow_ui(num.get_mpz_t(), p, a + 1);
    num -= 1;
    mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), p - 1);
    s *= num;
  }
  return s;
}

bool is_t_free(const Factorization& f, unsigned t) {
  if (t < 2) throw DomainError("is_t_free: t must be >= 2");
  return f.max_exponent() < t;
}

mpq_class psi_t(const Factorization& f, unsigned t) {
  if (t < 2) throw DomainError("psi_t: t must be >= 2");
  mpq_class r(f.value());
  mpz_class num, den;
  for (const auto& [p, a] : f.terms()) {
    // 1 + 1/p + ... + 1/p^(t-1) = (p^t - 1) / (p^(t-1) (p - 1))
    mpz_ui_pow_ui(num.get_mpz_t(), p, t);
    num -= 1;
    mpz_ui_pow_ui(den.get_mpz_t(), p, t - 1);
    den *= p - 1;
    r *= mpq_class(num, den);
  }
  r.canonicalize();
  return r;
}

const char* to_string(RiStatus s) noexcept {
  switch (s) {
    case RiStatus::Holds: return "Holds";
    case RiStatus::Violated: return "Violated";
    case RiStatus::Indeterminate: return "Indeterminate";
  }
  return "?";
}

RiVerdict ri_check(const Factorization& f, const Interval& gamma) {
  const mpz_class n = f.value();
  if (n <= 2) throw DomainError("ri_check: log log n needs n >= 3");
  const Precision prec = gamma.precision();
  const Interval n_enc = Interval::from_mpz(n, prec);
  RiVerdict v{log(n_enc), Interval::from_mpz(sigma(f), prec), Interval(prec)};
  v.robin_side = exp(gamma) * n_enc * log(v.log_n);
  if (proved_less(v.sigma_side, v.robin_side)) {
    v.status = RiStatus::Holds;
  } else if (proved_greater(v.sigma_side, v.robin_side)) {
    v.status = RiStatus::Violated;
  } else {
    v.status = RiStatus::Indeterminate;
  }
  return v;
}

std::vector<std::uint64_t> sigma_segment(std::uint64_t lo, std::uint64_t hi) {
  if (lo == 0 || lo > hi) throw RangeError("sigma_segment: need 1 <= lo <= hi");
  std::vector<std::uint64_t> s(hi - lo + 1, 0);
  // Each divisor pair (d, n/d) with d <= n/d is counted once from its small member.
  for (std::uint64_t d = 1; d * d <= hi; ++d) {
    std::uint64_t m = std::max(d * d, (lo + d - 1) / d * d);
    std::uint64_t q = m / d;
    for (; m <= hi; m += d, ++q) {
      s[m - lo] += (q == d) ? d : d + q;
    }
  }
  return s;
}

namespace {

struct SegmentResult {
  std::vector<std::uint64_t> counterexamples;
  std::uint64_t interval_checks = 0;
};

RiStatus decide_rigorously(std::uint64_t n, Precision prec) {
  for (Precision p = prec; p <= 8 * prec; p *= 2) {
    const RiStatus s = ri_check(Factorization::of(n), euler_gamma(p)).status;
    if (s != RiStatus::Indeterminate) return s;
  }
  throw PrecisionExhausted("small_scan: could not decide Robin's inequality at n = " + std::to_string(n));
}

SegmentResult scan_segment(std::uint64_t lo, std::uint64_t hi, Precision prec) {
  // e^gamma to double, then a 1e-9 relative cushion around every comparison;
  // libm log error is a few ulps, so only genuinely close n reach intervals.
  constexpr double kExpGamma = 1.7810724179901979852;
  constexpr double kCushion = 1e-9;
  SegmentResult out;
  const auto s = sigma_segment(lo, hi);
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const double sig = static_cast<double>(s[n - lo]);
    const double robin_side = kExpGamma * static_cast<double>(n) * std::log(std::log(static_cast<double>(n)));
    if (robin_side > 0 && sig < robin_side * (1 - kCushion)) continue;
    ++out.interval_checks;
    if (decide_rigorously(n, prec) == RiStatus::Violated) out.counterexamples.push_back(n);
  }
  return out;
}

}  // namespace

SmallScanReport small_scan(std::uint64_t limit, const SmallScanOptions& options) {
  if (limit < 3) throw RangeError("small_scan: limit must be >= 3");
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned threads =
      options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t seg = std::max<std::uint64_t>(options.segment_size, 1024);
  if (static_cast<double>(seg) * sizeof(std::uint64_t) * threads > static_cast<double>(options.memory_budget)) {
    throw ResourceError("small_scan: segment buffers exceed the memory budget");
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;
  for (std::uint64_t lo = 3; lo <= limit;) {
    const std::uint64_t hi = (limit - lo < seg - 1) ? limit : lo + seg - 1;
    segments.emplace_back(lo, hi);
    if (hi == limit) break;
    lo = hi + 1;
  }

  std::vector<std::future<std::vector<SegmentResult>>> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      std::vector<SegmentResult> mine;
      for (std::size_t i = w; i < segments.size(); i += threads) {
        mine.push_back(scan_segment(segments[i].first, segments[i].second, options.precision));
      }
      return mine;
    }));
  }

  SmallScanReport report;
  report.limit = limit;
  for (auto& w : workers) {
    for (auto& r : w.get()) {
      report.counterexamples.insert(report.counterexamples.end(), r.counterexamples.begin(),
                                    r.counterexamples.end());
      report.interval_checks += r.interval_checks;
    }
  }
  std::sort(report.counterexamples.begin(), report.counterexamples.end());
  report.max_counterexample = report.counterexamples.empty() ? 0 : report.counterexamples.back();
  report.complete = limit >= 5041;
  report.passed = report.max_counterexample <= 5040;
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

Interval rt_from_parts(std::uint64_t p_n, const Interval& theta_pn, const Interval& mertens_pn,
                       const Interval& zeta_t) {
  const Precision prec = std::max(theta_pn.precision(), mertens_pn.precision());
  const Interval tail = hull(Interval(1L, prec), exp(Interval(2L, prec) / Interval::from_uint(p_n, prec)));
  return tail * mertens_pn / (zeta_t * log(theta_pn));
}

Interval rt_primorial(std::size_t n, unsigned t, const PrimeTable& table) {
  if (n < 2) throw RangeError("rt_primorial: n must be >= 2");
  if (n > table.size()) throw OutOfRange("rt_primorial: n exceeds the prime table");
  return rt_from_parts(table.primes()[n - 1], table.theta_prefix(n - 1), table.mertens_prefix(n - 1),
                       zeta_int(t, table.precision()));
}

Interval rt_primorial_direct(std::size_t n, unsigned t, const PrimeTable& table) {
  if (n < 2) throw RangeError("rt_primorial_direct: n must be >= 2");
  if (n > table.size()) throw OutOfRange("rt_primorial_direct: n exceeds the prime table");
  std::vector<PrimePower> terms;
  terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) terms.push_back({table.primes()[i], 1});
  const Factorization f(std::move(terms));
  const mpz_class primorial = f.value();
  const Precision prec = table.precision();
  const Interval ratio = Interval::from_rational(mpq_class(psi_t(f, t) / primorial), prec);
  return ratio / log(log(Interval::from_mpz(primorial, prec)));
}

}  // namespace robin
