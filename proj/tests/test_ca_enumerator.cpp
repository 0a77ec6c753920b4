#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "ca_oracle.hpp"
#include "doctest.h"
#include "properties.hpp"
#include "robin/ca_enumerator.hpp"
#include "robin/constants.hpp"
#include "robin/error.hpp"

using namespace robin;

namespace {

bool near(const Interval& x, double v, double tol) { return x.lo() - tol <= v && v <= x.hi() + tol; }

bool overlaps(const Interval& a, const Interval& b) { return !proved_less(a, b) && !proved_greater(a, b); }

}  // namespace

TEST_CASE("benefit") {
  CHECK(near(benefit(2, 0), 0.58496250072115618146, 1e-15));
  CHECK(near(benefit(3, 0), 0.26185950714291487420, 1e-15));
  CHECK(near(benefit(2, 1), 0.22239242133644787570, 1e-15));
  CHECK(proved_greater(benefit(11, 0), benefit(2, 4)));
  CHECK(benefit(2, 0).width() < 1e-28);
  CHECK(step_ratio(2, 0) == mpq_class(3, 2));
  CHECK(step_ratio(2, 1) == mpq_class(7, 6));
  CHECK(step_ratio(5, 2) == mpq_class(156, 155));
  // A large exponent on a large prime stays a tight, positive enclosure.
  const Interval tiny = benefit(1'000'003, 5);
  CHECK(tiny.is_positive());
  CHECK(tiny.width() < tiny.lo() * 1e-25);
}

TEST_CASE("first colossally abundant numbers") {
  CaState s;
  const std::vector<unsigned long> expected = {2, 6, 12, 60, 120, 360, 2520, 5040, 55440, 720720, 1441440, 4324320};
  for (unsigned long n : expected) {
    next_step(s);
    CHECK(s.value() == n);
    CHECK(s.log_n().contains(log(Interval::from_uint(n, 300)).with_precision(132)));
  }
  CHECK(s.steps() == expected.size());
}

TEST_CASE("sequence matches the brute-force oracle for 200 steps") {
  testing::CaOracle oracle(testing::first_primes_upto(3000));
  CaState s;
  std::size_t largest = 0;
  for (int k = 0; k < 200; ++k) {
    const CaStep step = next_step(s);
    const std::size_t i = oracle.step();
    largest = std::max(largest, i);
    REQUIRE(step.prime == oracle.prime(i));
    REQUIRE(step.new_exponent == oracle.exponent(i));
    REQUIRE(proved_greater(step.benefit, step.runner_up));
  }
  // The pool was never the limiting factor.
  CHECK(largest + 10 < oracle.size());
  for (std::size_t i = 0; i < s.primes().size(); ++i) {
    CHECK(s.primes()[i] == oracle.prime(i));
    CHECK(s.exponents()[i] == oracle.exponent(i));
    CHECK(s.exponents()[i] <= 30);
  }
  CHECK_NOTHROW(s.validate());

  const testing::OracleAgreement a = testing::compare_with_oracle(200);
  CHECK(a.matched == 200);
  CHECK(a.first_values == std::vector<std::uint64_t>{2, 6, 12, 60, 120, 360, 2520, 5040});
}

TEST_CASE("state logarithms against exact values while n < 10^100") {
  CaState s;
  const Interval gamma = euler_gamma();
  while (s.log_n().hi() < 100 * std::log(10.0)) {
    next_step(s);
    const mpz_class n = s.value();
    const Interval exact_log_n = log(Interval::from_mpz(n, 400));
    CHECK(overlaps(s.log_n(), exact_log_n));
    const mpq_class ratio(sigma(s.factorization()), n);
    CHECK(overlaps(exp(s.log_sigma_ratio()), Interval::from_rational(ratio, 400)));
    CHECK_NOTHROW(s.validate());
    if (s.log_n().lo() > 1) {
      const RiVerdict mine = check_ri_state(s, gamma);
      const RiVerdict direct = ri_check(s.factorization(), gamma);
      CHECK(mine.status == direct.status);
    }
  }
}

TEST_CASE("Robin verdicts on states") {
  CaState s;
  const Interval gamma = euler_gamma();
  while (s.value() != 5040) next_step(s);
  CHECK(check_ri_state(s, gamma).status == RiStatus::Violated);
  next_step(s);
  CHECK(s.value() == 55440);
  CHECK(check_ri_state(s, gamma).status == RiStatus::Holds);
  CHECK_THROWS_AS(check_ri_state(CaState{}, gamma), DomainError);
}

TEST_CASE("primorial form") {
  const PrimorialForm f5040 = to_primorial_form(Factorization({{2, 4}, {3, 2}, {5, 1}, {7, 1}}));
  CHECK(f5040.to_string() == "7#·3#·2^2");
  CHECK(f5040.factors == std::vector<PrimorialFactor>{{7, 1}, {3, 1}, {2, 2}});
  CHECK(210 * 6 * 4 == 5040);
  CHECK(to_primorial_form(Factorization({{2, 1}})).to_string() == "2");
  CHECK(to_primorial_form(Factorization({{2, 19}, {3, 10}, {5, 3}, {7, 3}})).to_string() == "(7#)^3·(3#)^7·2^9");
  CHECK(to_primorial_form(Factorization{}).to_string() == "1");
  CHECK_THROWS_AS(to_primorial_form(Factorization({{2, 1}, {3, 2}})), StructureError);
  CHECK_THROWS_AS(to_primorial_form(Factorization({{2, 2}, {5, 1}})), StructureError);
}

TEST_CASE("property: primorial form round trip on 100 states") {
  const properties::SuiteResult r = properties::primorial_round_trip(100, 3);
  CHECK(r.cases == 100);
  CHECK(r.failures == 0);

  CaState s;
  for (int i = 0; i < 500; ++i) {
    next_step(s);
    const auto e = to_primorial_form(s).expand(s.primes());
    REQUIRE(std::equal(e.begin(), e.end(), s.exponents().begin(), s.exponents().end()));
  }
}

TEST_CASE("log n width stays within its linear budget") {
  CaState s;
  constexpr std::uint64_t kSteps = 20'000;
  for (std::uint64_t i = 0; i < kSteps; ++i) next_step(s);
  // Each step adds one outward-rounded logarithm at precision + 32 bits:
  // at most a few ulps of log n.
  const double ulp = s.log_n().hi() * std::ldexp(1.0, -static_cast<int>(s.precision() + 32));
  const double budget_per_step = 4 * ulp;
  CHECK(s.log_n().width() <= kSteps * budget_per_step);
  // Extrapolated to 10^7 steps, where log n is about 2.5e8 (p near 2e8):
  // 1e7 * 4 * 2.5e8 * 2^-132 is far below 1e-20.
  CHECK(1e7 * 4 * 2.5e8 * std::ldexp(1.0, -132) < 1e-20);
}

TEST_CASE("enumeration reports") {
  const Interval gamma = euler_gamma();
  const CaReport r1 = enumerate_until(1, gamma);
  CHECK(r1.small_violations == std::vector<std::uint64_t>{2, 6, 12, 60, 120, 360, 2520, 5040});
  CHECK(r1.passed);
  CHECK(r1.final_log10_n >= 10);

  const CaReport r3 = enumerate_until(3, gamma);
  CHECK(r3.passed);
  CHECK(r3.violations_above_5040 == 0);
  CHECK(r3.min_log_margin > 0);
  CHECK(r3.final_log10_n >= 1000);
  CHECK(r3.primorial_form.rfind("2287#", 0) == 0);

  CHECK_THROWS_AS(enumerate_until(0.5, gamma), RangeError);
  CHECK_THROWS_AS(enumerate_until(400, gamma), RangeError);
}

TEST_CASE("checkpoints") {
  const auto dir = std::filesystem::temp_directory_path() / "robin_ca_checkpoint_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "state.json";

  CaState a;
  for (int i = 0; i < 500; ++i) next_step(a);
  save_checkpoint(a, path);
  CaState b = load_checkpoint(path);
  CHECK(b.steps() == 500);
  CHECK(std::equal(a.exponents().begin(), a.exponents().end(), b.exponents().begin(), b.exponents().end()));
  CHECK(overlaps(a.log_n(), b.log_n()));
  CHECK(b.next_fresh_prime() == a.next_fresh_prime());
  for (int i = 0; i < 200; ++i) REQUIRE(next_step(a).prime == next_step(b).prime);

  // Periodic checkpoints during a run.
  std::filesystem::remove(path);
  CaState c;
  enumerate_until(c, 2, euler_gamma(), {.checkpoint_path = path, .checkpoint_every = 10});
  CHECK(std::filesystem::exists(path));
  CHECK(load_checkpoint(path).steps() % 10 == 0);

  {
    std::ofstream out(path, std::ios::trunc);
    out << R"({"format":"robin-ca-checkpoint","version":1,"precision":100,"steps":2,)"
        << R"("next_fresh_prime":5,"exponents":[1,2],"log_n":{"lo":"0x1p+0","hi":"0x1p+1"},)"
        << R"("log_sigma_ratio":{"lo":"0x1p+0","hi":"0x1p+1"}})";
  }
  CHECK_THROWS_AS(load_checkpoint(path), Error);
  {
    std::ofstream out(path, std::ios::trunc);
    out << "{ truncated";
  }
  CHECK_THROWS_AS(load_checkpoint(path), Error);
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.json"), Error);
  std::filesystem::remove_all(dir);
}
