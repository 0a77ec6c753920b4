#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <new>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "robin/bounds.hpp"
#include "robin/ca_enumerator.hpp"
#include "robin/constants.hpp"
#include "robin/error.hpp"
#include "robin/primes.hpp"
#include "robin/robin_core.hpp"

namespace robin::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr const char* kPrecisionEnv = "ROBIN_PRECISION";
constexpr Precision kMinPrecision = 8;
constexpr Precision kMaxPrecision = 1 << 16;

class ConfigError : public Error {
 public:
  using Error::Error;
};
class InputError : public Error {
 public:
  using Error::Error;
};
class OutputError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  unsigned t = 0;
  Precision precision = kDefaultPrecision;
  std::string coefficient = "1.388e-10";
  std::string c1_source = "stated";
  std::string output;
  std::string csv;
  // small-scan
  std::string limit = "10000000";
  unsigned threads = 0;
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  std::uint64_t memory_budget = std::uint64_t{1} << 30;
  // ca
  double target_exp = 0;
  std::string checkpoint;
  std::uint64_t checkpoint_every = 1'000'000;
  std::string resume;
  // g-table
  std::size_t grid = 1000;
  std::string function = "B";
  // theta-check, bound-chain
  std::string from = "599";
  std::string to;
  // mertens-check
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::string lower_max = "100000000";
  std::vector<std::string> upper_points = {"767135587", "1000000000"};
};

// Accepts 10000000, 1e7 and 10^7.
std::uint64_t parse_count(const std::string& text, const char* what) {
  auto fail = [&]() -> std::uint64_t { throw ConfigError(std::string(what) + ": not a non-negative integer: " + text); };
  if (text.empty()) return fail();
  if (const auto caret = text.find('^'); caret != std::string::npos) {
    const std::uint64_t base = parse_count(text.substr(0, caret), what);
    const std::uint64_t exp = parse_count(text.substr(caret + 1), what);
    const double v = std::pow(static_cast<double>(base), static_cast<double>(exp));
    if (v >= 1.8e19) return fail();
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) r *= base;
    return r;
  }
  if (text.find_first_of("eE.") != std::string::npos) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !(v >= 0) || v >= 1.8e19 || v != std::floor(v)) return fail();
    return static_cast<std::uint64_t>(v);
  }
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return fail();
  return v;
}

Precision default_precision() {
  const char* env = std::getenv(kPrecisionEnv);
  if (env == nullptr || *env == '\0') return kDefaultPrecision;
  long v = 0;
  const std::string s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(std::string(kPrecisionEnv) + " is not an integer: " + s);
  }
  return v;
}

GParams g_params(const RunConfig& c) {
  GParams p;
  p.precision = c.precision;
  p.g_inf_coefficient = c.coefficient == "1.338e-10" ? GInfCoefficient::Printed : GInfCoefficient::Proved;
  p.c1_source = c.c1_source == "recomputed" ? C1Source::Recomputed : C1Source::Stated;
  if (c.t >= 2) p.t = c.t;
  return p;
}

json interval_json(const Interval& x) { return {{"lo", x.lower_decimal(25)}, {"hi", x.upper_decimal(25)}}; }

json config_json(const RunConfig& c) {
  json j = {{"command", c.command},          {"precision", c.precision}, {"g_inf_coefficient", c.coefficient},
            {"c1_source", c.c1_source},      {"output", c.output},       {"csv", c.csv}};
  if (c.command == "certify" || c.command == "g-table" || c.command == "bound-chain") j["t"] = c.t;
  if (c.command == "small-scan") {
    j["limit"] = parse_count(c.limit, "--limit");
    j["threads"] = c.threads;
    j["segment_size"] = c.segment_size;
    j["memory_budget"] = c.memory_budget;
  } else if (c.command == "ca") {
    j["target_exp"] = c.target_exp;
    j["checkpoint"] = c.checkpoint;
    j["checkpoint_every"] = c.checkpoint_every;
    j["resume"] = c.resume;
  } else if (c.command == "g-table") {
    j["grid"] = c.grid;
    j["function"] = c.function;
  } else if (c.command == "theta-check" || c.command == "bound-chain") {
    j["from"] = parse_count(c.from, "--from");
    j["to"] = parse_count(c.to, "--to");
    if (c.command == "theta-check") j["memory_budget"] = c.memory_budget;
  } else if (c.command == "mertens-check") {
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["lower_max"] = parse_count(c.lower_max, "--lower-max");
    json ups = json::array();
    for (const auto& u : c.upper_points) ups.push_back(parse_count(u, "--upper"));
    j["upper_points"] = ups;
  }
  return j;
}

json cert_json(const CertResult& r) {
  return {{"t", r.t},
          {"g_B", interval_json(r.g_B_value)},
          {"g_inf", interval_json(r.g_inf_value)},
          {"g_B_verdict", to_string(r.g_B_verdict)},
          {"g_inf_verdict", to_string(r.g_inf_verdict)},
          {"passed", to_string(r.passed)},
          {"margin_B", r.margin_B},
          {"margin_inf", r.margin_inf},
          {"precision", r.precision}};
}

std::string cert_csv(const std::vector<CertResult>& rows) {
  std::ostringstream s;
  s.precision(17);
  s << "t,outcome,margin_B,margin_inf\n";
  for (const auto& r : rows) s << r.t << ',' << to_string(r.passed) << ',' << r.margin_B << ',' << r.margin_inf << '\n';
  return s.str();
}

json mertens_json(const MertensCheckReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"x", p.x},
                   {"product", interval_json(p.product)},
                   {"bound", interval_json(p.bound)},
                   {"holds", p.holds},
                   {"relative_margin", p.relative_margin}});
  }
  return {{"passed", r.passed}, {"points", pts}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw OutputError("cannot open " + path + " for writing");
  f << text;
  f.flush();
  if (!f) throw OutputError("write failed: " + path);
}

struct Outcome {
  int code = kOk;
  json result;
  std::string csv;
};

void validate(const RunConfig& c) {
  if (c.precision < kMinPrecision || c.precision > kMaxPrecision) {
    throw ConfigError("precision must lie in [" + std::to_string(kMinPrecision) + ", " +
                      std::to_string(kMaxPrecision) + "] bits");
  }
  const bool has_csv = c.command == "certify" || c.command == "max-t" || c.command == "small-scan" ||
                       c.command == "g-table";
  if (!c.csv.empty() && !has_csv) throw ConfigError("--csv is not available for " + c.command);
  const bool needs_t = c.command == "certify" || c.command == "g-table" || c.command == "bound-chain";
  if (needs_t && c.t < 2) throw ConfigError("--t must be >= 2");
  if (c.command == "small-scan" && parse_count(c.limit, "--limit") < 3) throw ConfigError("--limit must be >= 3");
  if (c.command == "small-scan" && c.segment_size == 0) throw ConfigError("--segment-size must be positive");
  if (c.command == "ca") {
    if (!(c.target_exp >= 1 && c.target_exp <= 300)) throw ConfigError("--target-exp must lie in [1, 300]");
    if (c.checkpoint_every == 0) throw ConfigError("--checkpoint-every must be positive");
  }
  if (c.command == "g-table" && c.grid < 2) throw ConfigError("--grid must be >= 2");
  if (c.command == "theta-check") {
    const auto lo = parse_count(c.from, "--from");
    const auto hi = parse_count(c.to, "--to");
    if (lo < 599 || lo >= hi) throw ConfigError("theta-check needs 599 <= --from < --to");
  }
  if (c.command == "bound-chain") {
    const auto lo = parse_count(c.from, "--from");
    const auto hi = parse_count(c.to, "--to");
    if (lo < 599 || lo > hi) throw ConfigError("bound-chain needs 599 <= --from <= --to");
  }
  if (c.command == "mertens-check") {
    if (parse_count(c.lower_max, "--lower-max") < 599) throw ConfigError("--lower-max must be >= 599");
    for (const auto& u : c.upper_points) {
      if (parse_count(u, "--upper") < 767'135'587) throw ConfigError("--upper points must be >= 767135587");
    }
  }
}

Outcome cmd_certify(const RunConfig& c) {
  const CertResult r = certify_t(c.t, g_params(c));
  Outcome o;
  o.result = cert_json(r);
  o.csv = cert_csv({r});
  o.code = r.passed == Verdict::Proved ? kOk : r.passed == Verdict::Failed ? kFailed : kIndeterminate;
  return o;
}

Outcome cmd_max_t(const RunConfig& c) {
  const MaxTResult r = max_certifiable_t(g_params(c));
  json scanned = json::array();
  for (const auto& s : r.scanned) scanned.push_back(cert_json(s));
  Outcome o;
  o.result = {{"t_star", r.t_star}, {"scanned", scanned}};
  o.csv = cert_csv(r.scanned);
  o.code = r.t_star >= 2 ? kOk : kFailed;
  return o;
}

Outcome cmd_c1(const RunConfig& c) {
  const C1Certificate r = c1_certificate(g_params(c));
  Outcome o;
  o.result = {{"piece1", interval_json(r.piece1)},
              {"piece2", interval_json(r.piece2)},
              {"total", interval_json(r.total)},
              {"piece1_within_5.055e-10", r.piece1.hi() <= 5.055e-10},
              {"piece2_within_2.139e-9", r.piece2.hi() <= 2.139e-9},
              {"split_constant_ok", r.split_constant_ok},
              {"zero_height_ok", r.zero_height_ok},
              {"within_stated", r.within_stated}};
  const bool ok = r.within_stated && r.split_constant_ok && r.zero_height_ok && r.piece1.hi() <= 5.055e-10 &&
                  r.piece2.hi() <= 2.139e-9;
  o.code = ok ? kOk : kFailed;
  return o;
}

Outcome cmd_small_scan(const RunConfig& c) {
  const SmallScanReport r = small_scan(parse_count(c.limit, "--limit"),
                                       {.segment_size = c.segment_size,
                                        .memory_budget = static_cast<std::size_t>(c.memory_budget),
                                        .threads = c.threads,
                                        .precision = c.precision});
  Outcome o;
  o.result = {{"limit", r.limit},
              {"counterexamples", r.counterexamples},
              {"count", r.counterexamples.size()},
              {"max_counterexample", r.max_counterexample},
              {"complete", r.complete},
              {"passed", r.passed},
              {"interval_checks", r.interval_checks}};
  std::ostringstream csv;
  csv << "n\n";
  for (auto n : r.counterexamples) csv << n << '\n';
  o.csv = csv.str();
  o.code = r.passed ? kOk : kFailed;
  return o;
}

Outcome cmd_ca(const RunConfig& c) {
  std::optional<CaState> state;
  if (!c.resume.empty()) {
    if (!std::filesystem::exists(c.resume)) throw InputError("checkpoint not found: " + c.resume);
    state.emplace(load_checkpoint(c.resume));
  } else {
    state.emplace(c.precision);
  }
  CaOptions opts{.precision = state->precision(), .checkpoint_path = c.checkpoint, .checkpoint_every = c.checkpoint_every};
  const CaReport r = enumerate_until(*state, c.target_exp, euler_gamma(c.precision), opts);
  if (!c.checkpoint.empty()) save_checkpoint(*state, c.checkpoint);
  Outcome o;
  o.result = {{"target_exp", r.target_log10_exponent},
              {"steps", r.steps},
              {"total_steps", state->steps()},
              {"small_violations", r.small_violations},
              {"violations_above_5040", r.violations_above_5040},
              {"first_violation_step", r.first_violation_step},
              {"precision_retries", r.precision_retries},
              {"min_log_margin", r.min_log_margin},
              {"min_margin_step", r.min_margin_step},
              {"final_log10_n", r.final_log10_n},
              {"largest_prime", r.largest_prime},
              {"final_log_n_width", r.final_log_n_width},
              {"primorial_form", r.primorial_form},
              {"passed", r.passed}};
  o.code = r.passed && r.min_log_margin > 0 ? kOk : kFailed;
  return o;
}

Outcome cmd_g_table(const RunConfig& c) {
  const GFunction which = c.function == "inf" ? GFunction::Inf : GFunction::B;
  const auto rows = g_table(which, c.t, c.grid, g_params(c));
  const MonotonicityReport m = check_non_increasing(rows);
  const std::string name = which == GFunction::B ? "g_B" : "g_inf";
  std::ostringstream csv;
  csv << "p,t," << name << "_lo," << name << "_hi\n";
  for (const auto& row : rows) {
    csv << row.p.lower_decimal(25) << ',' << c.t << ',' << row.g.lower_decimal(25) << ',' << row.g.upper_decimal(25)
        << '\n';
  }
  Outcome o;
  o.result = {{"function", name},
              {"t", c.t},
              {"points", rows.size()},
              {"non_increasing", m.non_increasing},
              {"proved_decreasing_pairs", m.proved_decreasing},
              {"increasing_pairs", m.increases},
              {"first", {{"p", rows.front().p.lower_decimal(25)}, {"g", interval_json(rows.front().g)}}},
              {"last", {{"p", rows.back().p.lower_decimal(25)}, {"g", interval_json(rows.back().g)}}}};
  o.csv = csv.str();
  o.code = m.non_increasing ? kOk : kFailed;
  return o;
}

Outcome cmd_theta_check(const RunConfig& c) {
  const auto lo = parse_count(c.from, "--from");
  const auto hi = parse_count(c.to, "--to");
  const PrimeTable table =
      sieve(hi, {.memory_budget = static_cast<std::size_t>(c.memory_budget), .precision = c.precision});
  const ThetaCheckReport r = theta_bound_check(lo, hi, table);
  Outcome o;
  o.result = {{"x_min", r.x_min},
              {"x_max", r.x_max},
              {"points_checked", r.points_checked},
              {"violations", r.violations},
              {"first_violation", r.first_violation},
              {"min_slack", r.min_slack},
              {"min_slack_at", r.min_slack_at},
              {"min_relative_slack", r.min_relative_slack},
              {"min_relative_slack_at", r.min_relative_slack_at},
              {"interval_fallbacks", r.interval_fallbacks},
              {"passed", r.passed}};
  o.code = r.passed ? kOk : kFailed;
  return o;
}

Outcome cmd_mertens_check(const RunConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::uint64_t> pick(599, parse_count(c.lower_max, "--lower-max"));
  std::vector<std::uint64_t> xs(c.samples);
  for (auto& x : xs) x = pick(rng);
  std::vector<std::uint64_t> ups;
  for (const auto& u : c.upper_points) ups.push_back(parse_count(u, "--upper"));
  const GParams p = g_params(c);
  const MertensCheckReport lower = mertens_lower_check(xs, p);
  const MertensCheckReport upper = mertens_upper_check(ups, p);
  Outcome o;
  o.result = {{"lower", mertens_json(lower)}, {"upper", mertens_json(upper)}, {"passed", lower.passed && upper.passed}};
  o.code = lower.passed && upper.passed ? kOk : kFailed;
  return o;
}

Outcome cmd_bound_chain(const RunConfig& c) {
  const BoundChainReport r =
      bound_chain_check(c.t, parse_count(c.from, "--from"), parse_count(c.to, "--to"), g_params(c));
  Outcome o;
  o.result = {{"t", r.t},
              {"p_min", r.p_min},
              {"p_max", r.p_max},
              {"primes_checked", r.primes_checked},
              {"violations", r.violations},
              {"first_violation", r.first_violation},
              {"min_relative_margin", r.min_relative_margin},
              {"min_margin_at", r.min_margin_at},
              {"passed", r.passed}};
  o.code = r.passed ? kOk : kFailed;
  return o;
}

Outcome dispatch(const RunConfig& c) {
  if (c.command == "certify") return cmd_certify(c);
  if (c.command == "max-t") return cmd_max_t(c);
  if (c.command == "c1") return cmd_c1(c);
  if (c.command == "small-scan") return cmd_small_scan(c);
  if (c.command == "ca") return cmd_ca(c);
  if (c.command == "g-table") return cmd_g_table(c);
  if (c.command == "theta-check") return cmd_theta_check(c);
  if (c.command == "mertens-check") return cmd_mertens_check(c);
  if (c.command == "bound-chain") return cmd_bound_chain(c);
  throw ConfigError("unknown command " + c.command);
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return kUsage;
  if (dynamic_cast<const InputError*>(&e)) return kNoInput;
  if (dynamic_cast<const OutputError*>(&e)) return kCannotCreate;
  if (dynamic_cast<const PrecisionExhausted*>(&e)) return kPrecision;
  if (dynamic_cast<const ResourceError*>(&e) || dynamic_cast<const std::bad_alloc*>(&e)) return kResource;
  if (dynamic_cast<const Error*>(&e)) return kDataError;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return kCannotCreate;
  return kPrecision;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c.precision = default_precision();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"Rigorous interval checks of Robin's inequality and the t-free bounds g_B, g_inf.", "robin"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--precision", c.precision,
                 "Working precision in bits (default " + std::to_string(c.precision) + ", env " + kPrecisionEnv + ")");
  app.add_option("-o,--output", c.output, "Write the JSON report here instead of stdout");
  app.add_option("--csv", c.csv, "Also write a CSV table here");
  app.add_option("--g-inf-coefficient", c.coefficient, "Linear coefficient in g_inf's denominator")
      ->check(CLI::IsMember({"1.388e-10", "1.338e-10"}));
  app.add_option("--c1-source", c.c1_source, "C1 fed to g_B: the stated constant or the recomputed enclosure")
      ->check(CLI::IsMember({"stated", "recomputed"}));

  auto* certify = app.add_subcommand("certify", "g_B(switch prime; t) < 1 and g_inf(B; t) < 1 (exit 0/1/2)");
  certify->add_option("--t", c.t, "Exponent t >= 2")->required();

  app.add_subcommand("max-t", "Largest t that certify proves, scanning up from 2");
  app.add_subcommand("c1", "Recompute the C1 certificate");

  auto* scan = app.add_subcommand("small-scan", "Robin's inequality for every 3 <= n <= limit");
  scan->add_option("--limit", c.limit, "Upper end (accepts 1e7 or 10^7)")->capture_default_str();
  scan->add_option("--threads", c.threads, "Worker threads (0: hardware)");
  scan->add_option("--segment-size", c.segment_size, "Integers per sieve segment")->capture_default_str();
  scan->add_option("--memory-budget", c.memory_budget, "Bytes allowed for segment buffers")->capture_default_str();

  auto* ca = app.add_subcommand("ca", "Walk the colossally abundant numbers up to 10^(10^target)");
  ca->add_option("--target-exp", c.target_exp, "Stop once log10 n >= 10^target")->required();
  ca->add_option("--checkpoint", c.checkpoint, "Checkpoint file, rewritten periodically and at the end");
  ca->add_option("--checkpoint-every", c.checkpoint_every, "Steps between checkpoints")->capture_default_str();
  ca->add_option("--resume", c.resume, "Continue from a checkpoint");

  auto* gt = app.add_subcommand("g-table", "g_B or g_inf on a geometric grid (CSV)");
  gt->add_option("--t", c.t, "Exponent t >= 2")->required();
  gt->add_option("--grid", c.grid, "Number of grid points")->capture_default_str();
  gt->add_option("--function", c.function, "B: [599, B]; inf: [e^55, 10 B]")
      ->check(CLI::IsMember({"B", "inf"}))
      ->capture_default_str();

  auto* theta_cmd = app.add_subcommand("theta-check", "|theta(x) - x| <= sqrt(x) log^2 x / (8 pi) on [from, to]");
  theta_cmd->add_option("--from", c.from, "Lower end (>= 599)")->capture_default_str();
  theta_cmd->add_option("--to", c.to, "Upper end")->required();
  theta_cmd->add_option("--memory-budget", c.memory_budget, "Bytes allowed for the prime table")->capture_default_str();

  auto* mc = app.add_subcommand("mertens-check", "Explicit Mertens product bounds against sieved products");
  mc->add_option("--samples", c.samples, "Random x for the lower bound")->capture_default_str();
  mc->add_option("--seed", c.seed, "Seed for the random x")->capture_default_str();
  mc->add_option("--lower-max", c.lower_max, "Random x are drawn from [599, lower-max]")->capture_default_str();
  mc->add_option("--upper", c.upper_points, "x values for the upper bound (>= 767135587)")->capture_default_str();

  auto* bc = app.add_subcommand("bound-chain", "e^-gamma R_t(p_n#) <= g_B(p_n; t) for primes in [from, to]");
  bc->add_option("--t", c.t, "Exponent t >= 2")->required();
  bc->add_option("--from", c.from, "Lower end (>= 599)")->capture_default_str();
  bc->add_option("--to", c.to, "Upper end")->required();

  app.footer(
      "Exit codes: 0 proved/passed, 1 failed or violation found, 2 indeterminate,\n"
      "64 usage or configuration error, 65 input rejected by a computation,\n"
      "66 input file missing, 70 precision exhausted, 71 memory budget exceeded,\n"
      "73 output not writable.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    validate(c);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = dispatch(c);
    json report = {{"schema_version", kSchemaVersion},
                   {"command", c.command},
                   {"config", config_json(c)},
                   {"result", std::move(o.result)},
                   {"exit_code", o.code}};
    report["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string text = report.dump(2) + "\n";

    if (c.command == "g-table" && c.csv.empty()) {
      // The table is the primary product here; the JSON summary goes only to --output.
      out << o.csv;
      if (!c.output.empty()) write_text(c.output, text);
    } else {
      if (c.output.empty()) {
        out << text;
      } else {
        write_text(c.output, text);
      }
      if (!c.csv.empty()) write_text(c.csv, o.csv);
    }
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace robin::cli
