#include "robin/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "robin/error.hpp"

namespace robin {
namespace {

Precision max_prec(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

// Re-initialises `dst` at prec when it is narrower.
void widen_to(mpfr_t dst, Precision prec) {
  if (mpfr_get_prec(dst) < prec) mpfr_prec_round(dst, prec, MPFR_RNDN);
}

std::string endpoint_decimal(mpfr_srcptr v, int digits, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(v)) return "0";
  char* buf = nullptr;
  const std::string fmt = "%." + std::to_string(std::max(digits - 1, 0)) + "R*e";
  mpfr_asprintf(&buf, fmt.c_str(), rnd, v);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string endpoint_hex(mpfr_srcptr v) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%Ra", v);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

Interval::Interval(Precision prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(long v, Precision prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_si(lo_, v, MPFR_RNDD);
  mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(const Interval& other) {
  mpfr_init2(lo_, other.precision());
  mpfr_init2(hi_, other.precision());
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept {
  mpfr_init2(lo_, other.precision());
  mpfr_init2(hi_, other.precision());
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_uint(std::uint64_t v, Precision prec) {
  Interval r(prec);
  mpfr_set_uj(r.lo_, v, MPFR_RNDD);
  mpfr_set_uj(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::from_mpz(const mpz_class& v, Precision prec) {
  Interval r(prec);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_rational(const mpq_class& q, Precision prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_double(double v, Precision prec) {
  if (!std::isfinite(v)) throw DomainError("Interval::from_double: non-finite value");
  Interval r(prec);
  mpfr_set_d(r.lo_, v, MPFR_RNDD);
  mpfr_set_d(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::from_decimal(std::string_view text, Precision prec) {
  const std::string s(text);
  Interval r(prec);
  if (mpfr_set_str(r.lo_, s.c_str(), 10, MPFR_RNDD) != 0 ||
      mpfr_set_str(r.hi_, s.c_str(), 10, MPFR_RNDU) != 0) {
    throw DomainError("Interval::from_decimal: cannot parse '" + s + "'");
  }
  return r;
}

Interval Interval::hull(double lo, double hi, Precision prec) {
  if (!(lo <= hi)) throw DomainError("Interval::hull: lo > hi");
  Interval r(prec);
  mpfr_set_d(r.lo_, lo, MPFR_RNDD);
  mpfr_set_d(r.hi_, hi, MPFR_RNDU);
  return r;
}

Interval Interval::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, Precision prec) {
  if (mpfr_greater_p(lo, hi)) throw DomainError("Interval::from_endpoints: lo > hi");
  Interval r(prec);
  mpfr_set(r.lo_, lo, MPFR_RNDD);
  mpfr_set(r.hi_, hi, MPFR_RNDU);
  return r;
}

Interval Interval::from_hex(std::string_view lo, std::string_view hi, Precision prec) {
  const std::string l(lo), h(hi);
  Interval r(prec);
  if (mpfr_set_str(r.lo_, l.c_str(), 0, MPFR_RNDD) != 0 ||
      mpfr_set_str(r.hi_, h.c_str(), 0, MPFR_RNDU) != 0 || mpfr_greater_p(r.lo_, r.hi_)) {
    throw DomainError("Interval::from_hex: malformed endpoints");
  }
  return r;
}

double Interval::lo() const noexcept { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi() const noexcept { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const noexcept {
  mpfr_t m;
  mpfr_init2(m, precision() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  const double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double Interval::width() const noexcept {
  mpfr_t w;
  mpfr_init2(w, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  const double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

bool Interval::contains(double v) const noexcept {
  return mpfr_cmp_d(lo_, v) <= 0 && mpfr_cmp_d(hi_, v) >= 0;
}

bool Interval::contains(const Interval& inner) const noexcept {
  return mpfr_lessequal_p(lo_, inner.lo_) && mpfr_greaterequal_p(hi_, inner.hi_);
}

bool Interval::contains_zero() const noexcept {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::is_positive() const noexcept { return mpfr_sgn(lo_) > 0; }

Interval Interval::with_precision(Precision prec) const {
  Interval r(prec);
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval& Interval::operator+=(const Interval& rhs) {
  const Precision p = max_prec(*this, rhs);
  widen_to(lo_, p);
  widen_to(hi_, p);
  mpfr_add(lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, rhs.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator-=(const Interval& rhs) {
  const Precision p = max_prec(*this, rhs);
  widen_to(lo_, p);
  widen_to(hi_, p);
  mpfr_sub(lo_, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, rhs.lo_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator*=(const Interval& rhs) {
  const Precision p = max_prec(*this, rhs);
  if (mpfr_sgn(lo_) >= 0 && mpfr_sgn(rhs.lo_) >= 0) {
    widen_to(lo_, p);
    widen_to(hi_, p);
    mpfr_mul(lo_, lo_, rhs.lo_, MPFR_RNDD);
    mpfr_mul(hi_, hi_, rhs.hi_, MPFR_RNDU);
    return *this;
  }
  // General case: extremes of the four endpoint products.
  mpfr_t cand_lo, cand_hi, t;
  mpfr_inits2(p, cand_lo, cand_hi, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_mul(cand_lo, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_mul(cand_hi, lo_, rhs.lo_, MPFR_RNDU);
  auto consider = [&](mpfr_srcptr a, mpfr_srcptr b) {
    mpfr_mul(t, a, b, MPFR_RNDD);
    mpfr_min(cand_lo, cand_lo, t, MPFR_RNDD);
    mpfr_mul(t, a, b, MPFR_RNDU);
    mpfr_max(cand_hi, cand_hi, t, MPFR_RNDU);
  };
  consider(lo_, rhs.hi_);
  consider(hi_, rhs.lo_);
  consider(hi_, rhs.hi_);
  mpfr_set_prec(lo_, p);
  mpfr_set_prec(hi_, p);
  mpfr_swap(lo_, cand_lo);
  mpfr_swap(hi_, cand_hi);
  mpfr_clears(cand_lo, cand_hi, t, static_cast<mpfr_ptr>(nullptr));
  return *this;
}

Interval& Interval::operator/=(const Interval& rhs) {
  if (rhs.contains_zero()) throw DomainError("Interval division: divisor contains 0");
  const Precision p = max_prec(*this, rhs);
  if (mpfr_sgn(lo_) >= 0 && rhs.is_positive()) {
    widen_to(lo_, p);
    widen_to(hi_, p);
    mpfr_div(lo_, lo_, rhs.hi_, MPFR_RNDD);
    mpfr_div(hi_, hi_, rhs.lo_, MPFR_RNDU);
    return *this;
  }
  mpfr_t cand_lo, cand_hi, t;
  mpfr_inits2(p, cand_lo, cand_hi, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_div(cand_lo, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_div(cand_hi, lo_, rhs.lo_, MPFR_RNDU);
  auto consider = [&](mpfr_srcptr a, mpfr_srcptr b) {
    mpfr_div(t, a, b, MPFR_RNDD);
    mpfr_min(cand_lo, cand_lo, t, MPFR_RNDD);
    mpfr_div(t, a, b, MPFR_RNDU);
    mpfr_max(cand_hi, cand_hi, t, MPFR_RNDU);
  };
  consider(lo_, rhs.hi_);
  consider(hi_, rhs.lo_);
  consider(hi_, rhs.hi_);
  mpfr_set_prec(lo_, p);
  mpfr_set_prec(hi_, p);
  mpfr_swap(lo_, cand_lo);
  mpfr_swap(hi_, cand_hi);
  mpfr_clears(cand_lo, cand_hi, t, static_cast<mpfr_ptr>(nullptr));
  return *this;
}

Interval& Interval::operator*=(unsigned long rhs) {
  mpfr_mul_ui(lo_, lo_, rhs, MPFR_RNDD);
  mpfr_mul_ui(hi_, hi_, rhs, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator/=(unsigned long rhs) {
  if (rhs == 0) throw DomainError("Interval division by 0");
  mpfr_div_ui(lo_, lo_, rhs, MPFR_RNDD);
  mpfr_div_ui(hi_, hi_, rhs, MPFR_RNDU);
  return *this;
}

std::string Interval::to_string(int digits) const {
  return "[" + lower_decimal(digits) + ", " + upper_decimal(digits) + "]";
}

std::string Interval::lower_decimal(int digits) const {
  return endpoint_decimal(lo_, digits, MPFR_RNDD);
}

std::string Interval::upper_decimal(int digits) const {
  return endpoint_decimal(hi_, digits, MPFR_RNDU);
}

std::string Interval::lower_hex() const { return endpoint_hex(lo_); }
std::string Interval::upper_hex() const { return endpoint_hex(hi_); }

Interval operator+(Interval a, const Interval& b) { return a += b; }
Interval operator-(Interval a, const Interval& b) { return a -= b; }
Interval operator*(Interval a, const Interval& b) { return a *= b; }
Interval operator/(Interval a, const Interval& b) { return a /= b; }
Interval operator*(Interval a, unsigned long b) { return a *= b; }
Interval operator/(Interval a, unsigned long b) { return a /= b; }

Interval operator-(const Interval& x) {
  Interval r(x.precision());
  mpfr_neg(r.lo_, x.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, x.lo_, MPFR_RNDU);
  return r;
}

Interval log(const Interval& x) {
  if (!x.is_positive()) throw DomainError("log: argument not provably positive");
  Interval r(x.precision());
  mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval log1p(const Interval& x) {
  if (mpfr_cmp_si(x.lo_, -1) <= 0) throw DomainError("log1p: argument not provably > -1");
  Interval r(x.precision());
  mpfr_log1p(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_log1p(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval exp(const Interval& x) {
  Interval r(x.precision());
  mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval sqrt(const Interval& x) {
  if (mpfr_sgn(x.lo_) < 0) throw DomainError("sqrt: argument not provably non-negative");
  Interval r(x.precision());
  mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval pow(const Interval& x, unsigned long n) {
  Interval r(x.precision());
  if (n == 0) {
    mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
    mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
    return r;
  }
  if (n % 2 == 1 || mpfr_sgn(x.lo_) >= 0) {
    mpfr_pow_ui(r.lo_, x.lo_, n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, x.hi_, n, MPFR_RNDU);
    return r;
  }
  if (mpfr_sgn(x.hi_) <= 0) {
    mpfr_pow_ui(r.lo_, x.hi_, n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, x.lo_, n, MPFR_RNDU);
    return r;
  }
  // Even power of an interval straddling 0.
  mpfr_set_zero(r.lo_, 1);
  mpfr_t a;
  mpfr_init2(a, x.precision());
  mpfr_abs(a, x.lo_, MPFR_RNDU);
  mpfr_max(a, a, x.hi_, MPFR_RNDU);
  mpfr_pow_ui(r.hi_, a, n, MPFR_RNDU);
  mpfr_clear(a);
  return r;
}

Interval pow(const Interval& x, const Interval& y) { return exp(y * log(x)); }

Interval square(const Interval& x) { return pow(x, 2); }

Interval hull(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval log_of_uint(std::uint64_t v, Precision prec) {
  if (v == 0) throw DomainError("log_of_uint: log 0");
  Interval r(prec);
  if (v == 1) return r;
  mpfr_t arg;
  mpfr_init2(arg, 64);
  mpfr_set_uj(arg, v, MPFR_RNDN);
  // Round-to-nearest is within half an ulp, so one step either side encloses.
  mpfr_log(r.hi_, arg, MPFR_RNDN);
  mpfr_set(r.lo_, r.hi_, MPFR_RNDN);
  mpfr_nextbelow(r.lo_);
  mpfr_nextabove(r.hi_);
  mpfr_clear(arg);
  return r;
}

bool proved_less(const Interval& a, const Interval& b) {
  return mpfr_less_p(a.upper(), b.lower());
}

bool proved_greater(const Interval& a, const Interval& b) {
  return mpfr_greater_p(a.lower(), b.upper());
}

bool proved_less(const Interval& a, double b) { return mpfr_cmp_d(a.upper(), b) < 0; }
bool proved_greater(const Interval& a, double b) { return mpfr_cmp_d(a.lower(), b) > 0; }

Verdict verdict_below(const Interval& x, double bound) {
  if (proved_less(x, bound)) return Verdict::Proved;
  if (proved_greater(x, bound)) return Verdict::Failed;
  return Verdict::Indeterminate;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Failed: return "Failed";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << x.to_string();
}

}  // namespace robin
