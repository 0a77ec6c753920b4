#include <random>

#include "doctest.h"
#include "properties.hpp"
#include "robin/bounds.hpp"
#include "robin/constants.hpp"
#include "robin/error.hpp"
#include "robin/primes.hpp"

using namespace robin;

namespace {

bool near(const Interval& x, double v, double tol) { return x.lo() - tol <= v && v <= x.hi() + tol; }

Interval at(std::uint64_t v) { return Interval::from_uint(v); }

// Smallest representable point >= e^55.
Interval e55() {
  const Interval e = exp(Interval(55L, kDefaultPrecision));
  return Interval::from_endpoints(e.upper(), e.upper(), kDefaultPrecision);
}

}  // namespace

TEST_CASE("C1 certificate") {
  const C1Certificate c = c1_certificate();
  CHECK(c.piece1.hi() <= 5.055e-10);
  CHECK(c.piece2.hi() <= 2.139e-9);
  CHECK(c.total.hi() <= 2.645e-9);
  CHECK(c.within_stated);
  CHECK(c.split_constant_ok);
  CHECK(c.zero_height_ok);
  // mpmath at 40 digits
  CHECK(near(c.piece1, 5.0545258488215553e-10, 1e-24));
  CHECK(near(c.piece2, 2.1381224413983757e-09, 1e-23));
  CHECK(c.total.width() < 1e-30);
}

TEST_CASE("parameters") {
  GParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.B_value().width() == 0.0);
  CHECK(near(p.C1_value(), 2.645e-9, 1e-24));
  p.c1_source = C1Source::Recomputed;
  CHECK(p.C1_value().hi() < 2.645e-9);
  p.t = 1;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.t = 20;
  p.B = "not a number";
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("tail factor") {
  CHECK(near(tail_factor(at(3)), 1.9477340410546758566, 1e-15));
  // True tail for t = 2 past p = 3 is zeta(2) (3/4) (8/9).
  CHECK(proved_less(zeta_int(2) * Interval::from_rational(mpq_class(2, 3)), tail_factor(at(3))));
  CHECK(proved_greater(tail_factor(at(1'000'000'007)), 1.0));
  CHECK_THROWS_AS(tail_factor(Interval(0L, 100)), DomainError);
  CHECK_THROWS_AS(tail_factor(Interval(-5L, 100)), DomainError);
}

TEST_CASE("Mertens lower bound") {
  const Interval rhs599 = mertens_lower_rhs(at(599));
  CHECK(near(rhs599, 0.084248472055824103403, 1e-15));
  const PrimeTable table = sieve(1'000'000);
  CHECK(proved_less(rhs599, Interval(1L, 100) / mertens_product(599, table)));
  CHECK(proved_less(mertens_lower_rhs(at(1'000'000)), Interval(1L, 100) / mertens_product(1'000'000, table)));
  CHECK_THROWS_AS(mertens_lower_rhs(at(500)), RangeError);
  CHECK_THROWS_AS(mertens_lower_rhs(Interval::from_decimal("2.17e25")), RangeError);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> pick(599, 100'000'000);
  std::vector<std::uint64_t> xs(200);
  for (auto& x : xs) x = pick(rng);
  const MertensCheckReport r = mertens_lower_check(xs);
  CHECK(r.passed);
  CHECK(r.points.size() == 200);
  for (const auto& pt : r.points) CHECK(pt.relative_margin > 0);
}

TEST_CASE("Mertens upper bound") {
  CHECK(near(mertens_upper_rhs(at(1'000'000'000)), 36.910453499693392429, 1e-12));
  CHECK_THROWS_AS(mertens_upper_rhs(at(700'000'000)), RangeError);
  CHECK_THROWS_AS(mertens_upper_rhs(at(767'135'586)), RangeError);
  CHECK_NOTHROW(mertens_upper_rhs(at(767'135'587)));
  const std::uint64_t too_small[] = {1'000'000};
  CHECK_THROWS_AS(mertens_upper_check(too_small), RangeError);
}

TEST_CASE("g_B") {
  CHECK(near(g_B(at(599), 2), 0.64253591665279245002, 1e-15));
  CHECK(proved_greater(g_B(at(599), 2), g_B(at(601), 2)));
  CHECK(near(g_B(at(29'996'208'012'611ULL), 20), 0.99999999404700724518, 1e-15));
  CHECK(proved_less(g_B(at(29'996'208'012'611ULL), 20), 1.0));
  CHECK(proved_greater(g_B(at(29'996'208'012'611ULL), 21), 1.0));
  CHECK_THROWS_AS(g_B(at(598), 2), RangeError);
  CHECK_THROWS_AS(g_B(Interval::from_decimal("3e25"), 2), RangeError);
  CHECK_THROWS_AS(g_B(at(599), 1), DomainError);
}

TEST_CASE("g_inf") {
  const GParams params;
  const Interval B = params.B_value();
  CHECK(near(g_inf(B, 20), 0.99999993940783150242, 1e-15));
  CHECK(proved_less(g_inf(B, 20), 1.0));
  CHECK(proved_greater(g_inf(B, 21), 1.0));
  CHECK(proved_less(g_inf(e55(), 2), 1.0));
  CHECK(near(g_inf(e55(), 2) * zeta_int(2), 1.0, 2e-6));

  // The printed coefficient is smaller, so it can only lower g_inf.
  GParams printed;
  printed.g_inf_coefficient = GInfCoefficient::Printed;
  CHECK(proved_less(g_inf(B, 20, printed), g_inf(B, 20)));
  CHECK(near(g_inf(B, 20, printed), 0.99999993940774579631, 1e-15));

  CHECK_THROWS_AS(g_inf(Interval::from_decimal("1e23"), 20), RangeError);
  CHECK_THROWS_AS(g_inf(B, 1), DomainError);
}

TEST_CASE("certification") {
  const CertResult r2 = certify_t(2);
  CHECK(r2.passed == Verdict::Proved);
  CHECK(near(r2.g_B_value, 0.6079, 1e-3));

  const CertResult r20 = certify_t(20);
  CHECK(r20.passed == Verdict::Proved);
  CHECK(r20.margin_B > 0);
  CHECK(r20.margin_inf > 0);

  const CertResult r21 = certify_t(21);
  CHECK(r21.passed == Verdict::Failed);
  CHECK(r21.g_B_verdict == Verdict::Failed);
  CHECK(r21.g_inf_verdict == Verdict::Failed);
  CHECK(r21.margin_B < 0);

  CHECK_THROWS_AS(certify_t(1), DomainError);

  const MaxTResult m = max_certifiable_t();
  CHECK(m.t_star == 20);
  CHECK(m.scanned.size() == 20);
  CHECK(m.scanned.back().t == 21);
  CHECK(m.scanned.back().passed == Verdict::Failed);

  GParams nearer;
  nearer.switch_prime = 1'000'000;
  CHECK(max_certifiable_t(nearer).t_star <= m.t_star);

  GParams printed;
  printed.g_inf_coefficient = GInfCoefficient::Printed;
  CHECK(max_certifiable_t(printed).t_star == 20);
  GParams recomputed;
  recomputed.c1_source = C1Source::Recomputed;
  CHECK(max_certifiable_t(recomputed).t_star == 20);
}

TEST_CASE("certification is monotone in t") {
  const GParams params;
  const Interval p = at(params.switch_prime);
  for (unsigned t = 2; t < 40; ++t) {
    CHECK(proved_less(g_B(p, t), g_B(p, t + 1)));
    CHECK(proved_less(g_inf(params.B_value(), t), g_inf(params.B_value(), t + 1)));
  }
}

TEST_CASE("property: sampled non-increase of g_B and g_inf") {
  for (unsigned t : {2u, 20u}) {
    const properties::SuiteResult r = properties::g_non_increasing(1000, t);
    CHECK(r.cases == 2 * 999);
    CHECK(r.failures == 0);
  }
  const auto rows = g_table(GFunction::B, 20, 1000);
  CHECK(rows.size() == 1000);
  CHECK(rows.front().p.contains(599.0));
  CHECK_THROWS_AS(g_table(GFunction::B, 20, 1), RangeError);

  // The checker does notice an increase.
  std::vector<GTableRow> rising = {{at(1), Interval(1L, 100)}, {at(2), Interval(2L, 100)}};
  CHECK_FALSE(check_non_increasing(rising).non_increasing);
}

TEST_CASE("bound chain on small primes") {
  const BoundChainReport r = bound_chain_check(20, 599, 100'000);
  CHECK(r.passed);
  CHECK(r.primes_checked == sieve(100'000).size() - sieve(598).size());
  CHECK(r.min_relative_margin > 0);
  CHECK_THROWS_AS(bound_chain_check(20, 500, 1000), RangeError);
  CHECK_THROWS_AS(bound_chain_check(20, 2000, 1000), RangeError);
  CHECK_THROWS_AS(bound_chain_check(1, 599, 1000), DomainError);
}
