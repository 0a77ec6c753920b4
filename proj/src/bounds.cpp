#include "robin/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

#include "robin/constants.hpp"
#include "robin/error.hpp"
#include "robin/primes.hpp"
#include "robin/robin_core.hpp"

namespace robin {

namespace {

constexpr unsigned kMaxScanT = 1000;
constexpr std::uint64_t kUpperThreshold = 767'135'587;

Interval dec(const char* text, Precision prec) { return Interval::from_decimal(text, prec); }

Interval num(long v, Precision prec) { return Interval(v, prec); }

bool le(const Interval& a, const Interval& b) { return mpfr_lessequal_p(a.upper(), b.lower()); }

// Everything g_B and g_inf need that does not depend on p.
struct Context {
  explicit Context(const GParams& params)
      : prec(params.precision),
        pi_(pi(prec)),
        B(params.B_value()),
        sqrt_B(sqrt(B)),
        log_B(log(B)),
        C1(params.C1_value()),
        linear(dec(params.g_inf_coefficient == GInfCoefficient::Proved ? "1.388e-10" : "1.338e-10", prec)) {}

  Precision prec;
  Interval pi_;
  Interval B;
  Interval sqrt_B;
  Interval log_B;
  Interval C1;
  Interval linear;
};

// eps(x) of the Mertens lower bound, with log x and sqrt x supplied.
Interval eps_B(const Context& c, const Interval& x, const Interval& lx, const Interval& sx) {
  const Precision prec = c.prec;
  const Interval e1 = dec("1.02", prec) / ((x - num(1, prec)) * lx);
  const Interval e2 = lx / (num(8, prec) * c.pi_ * sx);
  const Interval e4 = ((lx + num(3, prec)) * c.sqrt_B - (c.log_B + num(3, prec)) * sx) /
                      (num(4, prec) * c.pi_ * sx * c.sqrt_B);
  return e1 + e2 + c.C1 + e4;
}

void require_bound_range(const Context& c, const Interval& x, const char* what) {
  if (mpfr_cmp_ui(x.lower(), 599) < 0 || !mpfr_lessequal_p(x.upper(), c.B.upper())) {
    throw RangeError(std::string(what) + ": argument must lie in [599, B]");
  }
}

Interval g_B_in(const Context& c, const Interval& p, const Interval& zeta_t) {
  require_bound_range(c, p, "g_B");
  const Interval lp = log(p);
  const Interval sp = sqrt(p);
  const Interval arg = p - sp * square(lp) / (num(8, c.prec) * c.pi_);
  if (!arg.is_positive()) throw DomainError("g_B: p - sqrt(p) log^2 p / (8 pi) is not provably positive");
  const Interval numer = exp(num(2, c.prec) / p + eps_B(c, p, lp, sp)) * lp;
  return numer / (zeta_t * log(arg));
}

Interval g_inf_in(const Context& c, const Interval& p, const Interval& zeta_t) {
  const Interval lp = log(p);
  if (mpfr_cmp_ui(lp.lower(), 55) < 0) throw RangeError("g_inf: requires log p >= 55");
  const Precision prec = c.prec;
  const Interval e = num(2, prec) / p + dec("1.02", prec) / ((p - num(1, prec)) * lp) +
                     num(1, prec) / (num(6, prec) * pow(lp, 3)) + num(5, prec) / (num(8, prec) * pow(lp, 4));
  const Interval arg = p - c.linear * p - dec("1.4262", prec) * sqrt(p);
  if (!arg.is_positive()) throw DomainError("g_inf: logarithm argument is not provably positive");
  return exp(e) * lp / (zeta_t * log(arg));
}

CertResult certify_at(unsigned t, const GParams& params) {
  const Context c(params);
  const Interval zeta_t = zeta_int(t, params.precision);
  CertResult r;
  r.t = t;
  r.precision = params.precision;
  r.g_B_value = g_B_in(c, Interval::from_uint(params.switch_prime, params.precision), zeta_t);
  r.g_inf_value = g_inf_in(c, c.B, zeta_t);
  r.g_B_verdict = verdict_below(r.g_B_value, 1.0);
  r.g_inf_verdict = verdict_below(r.g_inf_value, 1.0);
  if (r.g_B_verdict == Verdict::Proved && r.g_inf_verdict == Verdict::Proved) {
    r.passed = Verdict::Proved;
  } else if (r.g_B_verdict == Verdict::Failed || r.g_inf_verdict == Verdict::Failed) {
    r.passed = Verdict::Failed;
  } else {
    r.passed = Verdict::Indeterminate;
  }
  r.margin_B = 1.0 - r.g_B_value.hi();
  r.margin_inf = 1.0 - r.g_inf_value.hi();
  return r;
}

double relative_gap(const Interval& small, const Interval& large) {
  return (large.mid() - small.mid()) / large.mid();
}

}  // namespace

void GParams::validate() const {
  if (t < 2) throw DomainError("GParams: t must be >= 2");
  if (precision < 32) throw DomainError("GParams: precision must be at least 32 bits");
  if (log_X0 <= 0) throw DomainError("GParams: log X0 must be positive");
  const Interval b = B_value();
  if (!b.is_positive()) throw DomainError("GParams: B must be positive");
  if (mpfr_cmp_ui(b.lower(), 599) < 0) throw DomainError("GParams: B must be at least 599");
  if (switch_prime < 599) throw DomainError("GParams: switch prime must be at least 599");
  const Interval c1 = Interval::from_decimal(C1, precision);
  if (c1.lo() < 0) throw DomainError("GParams: C1 must be non-negative");
}

Interval GParams::B_value() const { return Interval::from_decimal(B, precision); }

Interval GParams::C1_value() const {
  if (c1_source == C1Source::Recomputed) return c1_certificate(*this).total;
  return Interval::from_decimal(C1, precision);
}

const char* to_string(GInfCoefficient c) noexcept {
  return c == GInfCoefficient::Proved ? "1.388e-10" : "1.338e-10";
}

const char* to_string(C1Source s) noexcept { return s == C1Source::Stated ? "stated" : "recomputed"; }

C1Certificate c1_certificate(const GParams& params) {
  const Precision prec = params.precision;
  const Interval b = params.B_value();
  const Interval log_b = log(b);
  const Interval log_x0 = num(params.log_X0, prec);

  C1Certificate cert;
  // integral_B^X0 dt / (t log t) = log log X0 - log log B
  cert.piece1 = dec("1.430e-10", prec) * (log(log_x0) - log(log_b));

  // u = sqrt(log t): the integral becomes 2 integral_c^inf u^3 e^(-0.8 u) du.
  const Interval c = sqrt(log_x0);
  const Interval poly = pow(c, 3) / dec("0.8", prec) + num(3, prec) * square(c) / dec("0.64", prec) +
                        num(6, prec) * c / dec("0.512", prec) + num(6, prec) / dec("0.4096", prec);
  cert.piece2 = dec("30.3", prec) * num(2, prec) * exp(-(dec("0.8", prec) * c)) * poly;
  cert.total = cert.piece1 + cert.piece2;

  cert.split_constant_ok = le(dec("1.405e-10", prec) * (num(1, prec) + num(1, prec) / log_b), dec("1.430e-10", prec));
  cert.zero_height_ok = le(dec("4.92", prec) * sqrt(b / log_b), dec("3e12", prec));
  cert.within_stated = le(cert.total, dec("2.645e-9", prec));
  return cert;
}

Interval mertens_lower_rhs(const Interval& x, const GParams& params) {
  const Context c(params);
  require_bound_range(c, x, "mertens_lower_rhs");
  const Interval lx = log(x);
  const Interval sx = sqrt(x);
  const Interval exp_gamma = exp(euler_gamma(c.prec));
  return exp(-eps_B(c, x, lx, sx)) / (exp_gamma * lx);
}

Interval tail_factor(const Interval& p) {
  if (!p.is_positive()) throw DomainError("tail_factor: p must be positive");
  return exp(Interval(2L, p.precision()) / p);
}

Interval g_B(const Interval& p, unsigned t, const GParams& params) {
  if (t < 2) throw DomainError("g_B: t must be >= 2");
  const Context c(params);
  return g_B_in(c, p, zeta_int(t, params.precision));
}

Interval g_inf(const Interval& p, unsigned t, const GParams& params) {
  if (t < 2) throw DomainError("g_inf: t must be >= 2");
  const Context c(params);
  return g_inf_in(c, p, zeta_int(t, params.precision));
}

Interval mertens_upper_rhs(const Interval& x, const GParams& params) {
  if (mpfr_cmp_ui(x.lower(), kUpperThreshold) < 0) {
    throw RangeError("mertens_upper_rhs: requires x >= 767135587");
  }
  const Precision prec = params.precision;
  const Interval lx = log(x);
  const Interval e = dec("1.02", prec) / ((x - num(1, prec)) * lx) + num(1, prec) / (num(6, prec) * pow(lx, 3)) +
                     num(5, prec) / (num(8, prec) * pow(lx, 4));
  return exp(euler_gamma(prec)) * lx * exp(e);
}

CertResult certify_t(unsigned t, const GParams& params) {
  if (t < 2) throw DomainError("certify_t: t must be >= 2");
  CertResult r = certify_at(t, params);
  if (r.passed == Verdict::Indeterminate) {
    GParams finer = params;
    finer.precision = 2 * params.precision;
    r = certify_at(t, finer);
  }
  return r;
}

MaxTResult max_certifiable_t(const GParams& params) {
  MaxTResult out;
  for (unsigned t = 2; t <= kMaxScanT; ++t) {
    out.scanned.push_back(certify_t(t, params));
    if (out.scanned.back().passed != Verdict::Proved) break;
    out.t_star = t;
  }
  return out;
}

std::vector<GTableRow> g_table(GFunction which, unsigned t, std::size_t points, const GParams& params) {
  if (points < 2) throw RangeError("g_table: need at least two grid points");
  if (t < 2) throw DomainError("g_table: t must be >= 2");
  const Context c(params);
  const Interval zeta_t = zeta_int(t, params.precision);
  const Precision prec = params.precision;

  // Grid endpoints as exact points inside the domain.
  const Interval lo = which == GFunction::B ? num(599, prec) : exp(num(55, prec));
  const Interval hi = which == GFunction::B ? c.B : num(10, prec) * c.B;
  const Interval first = Interval::from_endpoints(lo.upper(), lo.upper(), prec);
  const Interval last = Interval::from_endpoints(hi.lower(), hi.lower(), prec);
  const Interval log_first = log(first);
  const Interval step = (log(last) - log_first) / Interval::from_uint(points - 1, prec);

  std::vector<GTableRow> rows;
  rows.reserve(points);
  mpfr_t m;
  mpfr_init2(m, prec);
  for (std::size_t i = 0; i < points; ++i) {
    Interval p = first;
    if (i + 1 == points) {
      p = last;
    } else if (i > 0) {
      const Interval e = exp(log_first + step * Interval::from_uint(i, prec));
      mpfr_add(m, e.lower(), e.upper(), MPFR_RNDN);
      mpfr_div_2ui(m, m, 1, MPFR_RNDN);
      p = Interval::from_endpoints(m, m, prec);
    }
    const Interval g = which == GFunction::B ? g_B_in(c, p, zeta_t) : g_inf_in(c, p, zeta_t);
    rows.push_back({p, g});
  }
  mpfr_clear(m);
  return rows;
}

MonotonicityReport check_non_increasing(std::span<const GTableRow> rows) {
  MonotonicityReport r;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ++r.pairs;
    if (proved_greater(rows[i].g, rows[i - 1].g)) ++r.increases;
    if (proved_less(rows[i].g, rows[i - 1].g)) ++r.proved_decreasing;
  }
  r.non_increasing = r.increases == 0;
  return r;
}

MertensCheckReport mertens_lower_check(std::span<const std::uint64_t> xs, const GParams& params) {
  const Context c(params);
  for (std::uint64_t x : xs) require_bound_range(c, Interval::from_uint(x, params.precision), "mertens_lower_check");
  const auto products = mertens_products_streamed(xs, params.precision + 32);
  MertensCheckReport report;
  report.passed = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    MertensPoint pt;
    pt.x = xs[i];
    pt.product = Interval(1L, params.precision + 32) / products[i];
    pt.bound = mertens_lower_rhs(Interval::from_uint(xs[i], params.precision), params);
    pt.holds = proved_less(pt.bound, pt.product);
    pt.relative_margin = relative_gap(pt.bound, pt.product);
    report.passed = report.passed && pt.holds;
    report.points.push_back(std::move(pt));
  }
  return report;
}

MertensCheckReport mertens_upper_check(std::span<const std::uint64_t> xs, const GParams& params) {
  for (std::uint64_t x : xs) {
    if (x < kUpperThreshold) throw RangeError("mertens_upper_check: requires x >= 767135587");
  }
  const auto products = mertens_products_streamed(xs, params.precision + 32);
  MertensCheckReport report;
  report.passed = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    MertensPoint pt;
    pt.x = xs[i];
    pt.product = products[i];
    pt.bound = mertens_upper_rhs(Interval::from_uint(xs[i], params.precision), params);
    pt.holds = proved_less(pt.product, pt.bound);
    pt.relative_margin = relative_gap(pt.product, pt.bound);
    report.passed = report.passed && pt.holds;
    report.points.push_back(std::move(pt));
  }
  return report;
}

BoundChainReport bound_chain_check(unsigned t, std::uint64_t p_min, std::uint64_t p_max, const GParams& params) {
  if (t < 2) throw DomainError("bound_chain_check: t must be >= 2");
  const Context c(params);
  if (p_min < 599 || p_min > p_max) throw RangeError("bound_chain_check: need 599 <= p_min <= p_max");
  require_bound_range(c, Interval::from_uint(p_max, params.precision), "bound_chain_check");

  const auto t0 = std::chrono::steady_clock::now();
  const Precision prec = params.precision;
  const Precision work = prec + 32;
  const Interval zeta_t = zeta_int(t, prec);
  const Interval exp_minus_gamma = exp(-euler_gamma(prec));

  BoundChainReport report;
  report.t = t;
  report.p_min = p_min;
  report.p_max = p_max;
  report.min_relative_margin = std::numeric_limits<double>::infinity();
  Interval theta_p(0L, work);
  Interval mertens_p(1L, work);
  for_each_prime(2, p_max, [&](std::uint64_t p) {
    theta_p += log_of_uint(p, work);
    mertens_p *= p;
    mertens_p /= p - 1;
    if (p < p_min) return;
    const Interval lhs = exp_minus_gamma * rt_from_parts(p, theta_p, mertens_p, zeta_t);
    const Interval g = g_B_in(c, Interval::from_uint(p, prec), zeta_t);
    ++report.primes_checked;
    const double margin = (g.lo() - lhs.hi()) / g.lo();
    if (margin < report.min_relative_margin) {
      report.min_relative_margin = margin;
      report.min_margin_at = p;
    }
    if (!proved_less(lhs, g)) {
      if (report.violations++ == 0) report.first_violation = p;
    }
  });
  report.passed = report.violations == 0 && report.primes_checked > 0;
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace robin
