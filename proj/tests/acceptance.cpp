// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ca_oracle.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "properties.hpp"
#include "robin/bounds.hpp"

using nlohmann::json;
using namespace robin;

namespace {

// Wall-clock limits in seconds; 0 means no limit.
constexpr double kSmallScanLimit = 120;
constexpr double kC1Limit = 1;
constexpr double kCertifyLimit = 1;
constexpr double kCaLimit = 300;
constexpr double kThetaLimit = 300;

constexpr std::size_t kExpectedCounterexamples = 26;
constexpr std::uint64_t kLargestCounterexample = 5040;
constexpr double kPiece1Max = 5.055e-10;
constexpr double kPiece2Max = 2.139e-9;
constexpr double kC1Max = 2.645e-9;
constexpr std::uint64_t kSwitchPrime = 29'996'208'012'611;
constexpr std::size_t kOracleSteps = 200;
constexpr std::size_t kMertensSamples = 200;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Cli {
  int code;
  json report;
};

Cli run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "robin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  json report;
  try {
    report = json::parse(out.str());
  } catch (const json::exception&) {
    report = {{"stderr", err.str()}};
  }
  return {code, report};
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

unsigned t_star = 0;

Outcome small_scan_criterion() {
  const Cli r = run_cli({"small-scan", "--limit", "10^7"});
  const json& res = r.report["result"];
  const std::size_t count = res.value("count", std::size_t{0});
  const std::uint64_t max = res.value("max_counterexample", std::uint64_t{0});
  return {r.code == 0 && count == kExpectedCounterexamples && max == kLargestCounterexample &&
              res.value("complete", false),
          fmt("%zu counterexamples up to 10^7, largest %llu", count, static_cast<unsigned long long>(max))};
}

Outcome c1_criterion() {
  const C1Certificate c = c1_certificate();
  const bool ok = c.piece1.hi() <= kPiece1Max && c.piece2.hi() <= kPiece2Max && c.total.hi() <= kC1Max;
  return {ok, fmt("piece1 <= %.6Le, piece2 <= %.6Le, total <= %.6Le", static_cast<long double>(c.piece1.hi()),
                  static_cast<long double>(c.piece2.hi()), static_cast<long double>(c.total.hi()))};
}

Outcome certify_criterion() {
  GParams params;
  params.switch_prime = kSwitchPrime;
  const MaxTResult m = max_certifiable_t(params);
  t_star = m.t_star;
  if (t_star < 2) return {false, "no t certifies"};
  const CertResult at = certify_t(t_star, params);
  const CertResult above = certify_t(t_star + 1, params);
  const bool ok = at.g_B_verdict == Verdict::Proved && at.g_inf_verdict == Verdict::Proved &&
                  above.g_B_verdict == Verdict::Failed && above.g_inf_verdict == Verdict::Failed;
  return {ok, fmt("t* = %u; margins at t*: %.3e (g_B), %.3e (g_inf); at t*+1: %.3e, %.3e", t_star, at.margin_B,
                  at.margin_inf, above.margin_B, above.margin_inf)};
}

Outcome ca_criterion() {
  const Cli r = run_cli({"ca", "--target-exp", "6"});
  const json& res = r.report["result"];
  const double margin = res.value("min_log_margin", -1.0);
  const std::uint64_t above = res.value("violations_above_5040", std::uint64_t{1});
  const double reached = res.value("final_log10_n", 0.0);
  return {r.code == 0 && margin > 0 && above == 0 && reached >= 1e6,
          fmt("%llu states, log10 n reached %.1f, min margin %.3e, %llu violations above 5040",
              static_cast<unsigned long long>(res.value("steps", std::uint64_t{0})), reached, margin,
              static_cast<unsigned long long>(above))};
}

Outcome oracle_criterion() {
  const testing::OracleAgreement a = testing::compare_with_oracle(kOracleSteps);
  const std::vector<std::uint64_t> first = {2, 6, 12, 60, 120, 360, 2520, 5040};
  // The pool must never have been the binding constraint.
  const bool ok = a.matched == kOracleSteps && a.first_values == first && a.largest_index + 1 < a.pool_size;
  return {ok, fmt("%zu of %zu states match, first eight values %s", a.matched, kOracleSteps,
                  a.first_values == first ? "as expected" : "differ")};
}

Outcome theta_criterion() {
  const Cli r = run_cli({"theta-check", "--from", "599", "--to", "1e8"});
  const json& res = r.report["result"];
  return {r.code == 0 && res.value("passed", false) && res.value("violations", std::uint64_t{1}) == 0,
          fmt("%llu critical points in [599, 1e8], min relative slack %.3e",
              static_cast<unsigned long long>(res.value("points_checked", std::uint64_t{0})),
              res.value("min_relative_slack", 0.0))};
}

Outcome mertens_criterion() {
  const Cli r = run_cli({"mertens-check", "--samples", std::to_string(kMertensSamples), "--lower-max", "1e8", "--upper",
                         "767135587", "--upper", "1e9"});
  const json& res = r.report["result"];
  std::size_t lower_ok = 0, upper_ok = 0;
  for (const auto& p : res["lower"]["points"]) lower_ok += p.value("holds", false);
  for (const auto& p : res["upper"]["points"]) upper_ok += p.value("holds", false);
  return {r.code == 0 && lower_ok == kMertensSamples && upper_ok == 2,
          fmt("lower bound holds at %zu/%zu random x, upper bound at %zu/2 points", lower_ok, kMertensSamples,
              upper_ok)};
}

Outcome bound_chain_criterion() {
  if (t_star < 2) return {false, "t* unavailable"};
  const Cli r = run_cli({"bound-chain", "--t", std::to_string(t_star), "--from", "599", "--to", "1e6"});
  const json& res = r.report["result"];
  return {r.code == 0 && res.value("passed", false) && res.value("violations", std::uint64_t{1}) == 0,
          fmt("t = %u, %llu primes in [599, 1e6], min relative margin %.3e", t_star,
              static_cast<unsigned long long>(res.value("primes_checked", std::uint64_t{0})),
              res.value("min_relative_margin", 0.0))};
}

Outcome property_criterion() {
  const auto soundness = properties::interval_soundness(100'000, 20240917);
  const auto sigma = properties::sigma_below_psi(10'000, 11);
  const auto roundtrip = properties::primorial_round_trip(100, 3);
  const auto g2 = properties::g_non_increasing(1000, 2);
  const auto g = properties::g_non_increasing(1000, t_star < 2 ? 20 : t_star);
  const bool ok = soundness.passed() && soundness.cases == 100'000 && sigma.passed() && sigma.cases == 10'000 &&
                  roundtrip.passed() && roundtrip.cases == 100 && g2.passed() && g.passed();
  return {ok, fmt("interval %zu/%zu, sigma<=Psi %zu/%zu, round trip %zu/%zu, g grids %zu/%zu pairs",
                  soundness.cases - soundness.failures, soundness.cases, sigma.cases - sigma.failures, sigma.cases,
                  roundtrip.cases - roundtrip.failures, roundtrip.cases, g2.cases + g.cases - g2.failures - g.failures,
                  g2.cases + g.cases)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> check;
  };
  // Criterion 8 and the g grids use t* from criterion 3, so order matters.
  const std::vector<Criterion> criteria = {
      {1, "small-n counterexamples", kSmallScanLimit, small_scan_criterion},
      {2, "C1 certificate", kC1Limit, c1_criterion},
      {3, "certification endpoint", kCertifyLimit, certify_criterion},
      {4, "CA states up to 10^(10^6)", kCaLimit, ca_criterion},
      {5, "CA sequence oracle", 0, oracle_criterion},
      {6, "theta bound on [599, 1e8]", kThetaLimit, theta_criterion},
      {7, "Mertens product bounds", 0, mertens_criterion},
      {8, "bound chain on [599, 1e6]", 0, bound_chain_criterion},
      {9, "property suites", 0, property_criterion},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit == 0 || seconds < c.limit;
    const bool passed = o.passed && in_time;
    failures += !passed;
    std::string timing = fmt("%.2f s", seconds);
    if (c.limit > 0) timing += fmt(", limit %.0f s", c.limit);
    std::printf("%s %d %s: %s (%s)\n", passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
