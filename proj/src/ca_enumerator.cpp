#include "robin/ca_enumerator.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "robin/constants.hpp"
#include "robin/error.hpp"

namespace robin {

namespace {

constexpr Precision kGuardBits = 32;
constexpr int kMaxDoublings = 4;
constexpr const char* kCheckpointFormat = "robin-ca-checkpoint";
constexpr int kCheckpointVersion = 1;

mpz_class power(std::uint64_t p, std::uint32_t e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

// log of the step ratio, via log1p of (p - 1) / (p^(a+2) - p).
Interval log_step_ratio(std::uint64_t p, std::uint32_t a, Precision prec) {
  const mpz_class big = power(p, a + 2);
  return log1p(Interval::from_rational(mpq_class(mpz_class(p - 1), big - p), prec));
}

// log(sigma(p^a) / p^a) = log1p((p^a - 1) / (p^a (p - 1))).
Interval log_sigma_part(std::uint64_t p, std::uint32_t a, Precision prec) {
  const mpz_class pa = power(p, a);
  return log1p(Interval::from_rational(mpq_class(pa - 1, pa * (p - 1)), prec));
}

struct Logs {
  Interval log_n;
  Interval log_sigma_ratio;
};

Logs logs_at(std::span<const std::uint64_t> primes, std::span<const std::uint32_t> exponents, Precision prec) {
  Logs out{Interval(0L, prec), Interval(0L, prec)};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    out.log_n += log_of_uint(primes[i], prec) * exponents[i];
    out.log_sigma_ratio += log_sigma_part(primes[i], exponents[i], prec);
  }
  return out;
}

RiVerdict verdict_from_logs(const Interval& log_n, const Interval& log_sigma_ratio, const Interval& gamma) {
  if (mpfr_cmp_ui(log_n.lower(), 1) <= 0) throw DomainError("check_ri_state: needs log n > 1");
  RiVerdict v{log_n, log_sigma_ratio, gamma + log(log(log_n))};
  if (proved_less(v.sigma_side, v.robin_side)) {
    v.status = RiStatus::Holds;
  } else if (proved_greater(v.sigma_side, v.robin_side)) {
    v.status = RiStatus::Violated;
  } else {
    v.status = RiStatus::Indeterminate;
  }
  return v;
}

}  // namespace

mpq_class step_ratio(std::uint64_t p, std::uint32_t a) {
  const mpz_class big = power(p, a + 2);
  mpq_class r(big - 1, big - p);
  r.canonicalize();
  return r;
}

Interval benefit(std::uint64_t p, std::uint32_t a, Precision prec) {
  if (p < 2) throw DomainError("benefit: p must be prime");
  return log_step_ratio(p, a, prec) / log_of_uint(p, prec);
}

bool CaState::ByUpper::operator()(const Candidate& a, const Candidate& b) const {
  const int c = mpfr_cmp(a.value.upper(), b.value.upper());
  if (c != 0) return c > 0;
  return a.index < b.index;
}

CaState::CaState(Precision prec)
    : precision_(prec),
      generator_(2),
      log_n_(0L, prec + kGuardBits),
      log_sigma_ratio_(0L, prec + kGuardBits) {
  fresh_ = generator_.next();
  admit(0);
}

std::uint64_t CaState::prime_at(std::size_t index) const {
  return index < primes_.size() ? primes_[index] : fresh_;
}

std::uint32_t CaState::exponent_at(std::size_t index) const {
  return index < exponents_.size() ? exponents_[index] : 0;
}

CaState::Candidate CaState::make_candidate(std::size_t index, Precision prec) const {
  return Candidate{benefit(prime_at(index), exponent_at(index), prec), index};
}

void CaState::admit(std::size_t index) { frontier_.insert(make_candidate(index, precision_)); }

Factorization CaState::factorization() const {
  std::vector<PrimePower> terms;
  terms.reserve(primes_.size());
  for (std::size_t i = 0; i < primes_.size(); ++i) terms.push_back({primes_[i], exponents_[i]});
  return Factorization(std::move(terms));
}

mpz_class CaState::value() const { return factorization().value(); }

void CaState::recompute_logs(Precision prec) {
  Logs l = logs_at(primes_, exponents_, prec);
  log_n_ = std::move(l.log_n);
  log_sigma_ratio_ = std::move(l.log_sigma_ratio);
}

void CaState::validate() const {
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (exponents_[i] == 0) throw StructureError("CaState: zero exponent on p = " + std::to_string(primes_[i]));
    if (i > 0 && exponents_[i] > exponents_[i - 1]) {
      throw StructureError("CaState: exponent increases at p = " + std::to_string(primes_[i]));
    }
  }
}

CaState CaState::from_exponents(std::vector<std::uint32_t> exponents, std::uint64_t steps, Precision prec) {
  CaState s(prec);
  s.frontier_.clear();
  s.generator_ = PrimeGenerator(2);
  for (std::size_t i = 0; i < exponents.size(); ++i) s.primes_.push_back(s.generator_.next());
  s.exponents_ = std::move(exponents);
  s.fresh_ = s.generator_.next();
  s.steps_ = steps;
  s.validate();
  s.recompute_logs(prec + kGuardBits);
  for (std::size_t i = 0; i <= s.primes_.size(); ++i) s.admit(i);
  return s;
}

CaStep next_step(CaState& s) {
  const Precision max_prec = s.precision_ << kMaxDoublings;
  Precision used = s.precision_;
  for (;;) {
    auto top = s.frontier_.begin();
    auto second = std::next(top);
    if (second == s.frontier_.end() || mpfr_greater_p(top->value.lower(), second->value.upper())) break;
    const Precision current = std::max(top->value.precision(), second->value.precision());
    if (current >= max_prec) {
      throw PrecisionExhausted("next_step: cannot separate the benefits of p = " +
                               std::to_string(s.prime_at(top->index)) + " and p = " +
                               std::to_string(s.prime_at(second->index)));
    }
    // Distinct primes never have equal benefits: equality would make a
    // rational power of p_1 equal to a rational power of p_2.
    used = 2 * current;
    const std::size_t a = top->index;
    const std::size_t b = second->index;
    s.frontier_.erase(second);
    s.frontier_.erase(s.frontier_.begin());
    s.frontier_.insert(s.make_candidate(a, used));
    s.frontier_.insert(s.make_candidate(b, used));
  }

  auto top = s.frontier_.begin();
  CaStep step;
  step.benefit = top->value;
  step.precision = used;
  const auto second = std::next(top);
  step.runner_up = second != s.frontier_.end() ? second->value : Interval(0L, s.precision_);
  const std::size_t index = top->index;
  s.frontier_.erase(top);

  if (index == s.primes_.size()) {
    s.primes_.push_back(s.fresh_);
    s.exponents_.push_back(0);
    s.fresh_ = s.generator_.next();
    s.admit(s.primes_.size());
  }
  const std::uint64_t p = s.primes_[index];
  const Precision work = s.precision_ + kGuardBits;
  s.log_sigma_ratio_ += log_step_ratio(p, s.exponents_[index], work);
  s.log_n_ += log_of_uint(p, work);
  ++s.exponents_[index];
  // Only one exponent moved, so this keeps the whole vector non-increasing.
  if (index > 0 && s.exponents_[index] > s.exponents_[index - 1]) {
    throw StructureError("next_step: exponent of p = " + std::to_string(p) + " overtook its predecessor");
  }
  s.admit(index);
  ++s.steps_;

  step.prime = p;
  step.new_exponent = s.exponents_[index];
  return step;
}

RiVerdict check_ri_state(const CaState& state, const Interval& gamma) {
  return verdict_from_logs(state.log_n(), state.log_sigma_ratio(), gamma);
}

std::string PrimorialForm::to_string() const {
  if (factors.empty()) return "1";
  std::string out;
  for (const auto& [q, m] : factors) {
    if (!out.empty()) out += "·";
    if (q == 2) {
      out += m == 1 ? "2" : "2^" + std::to_string(m);
    } else {
      out += m == 1 ? std::to_string(q) + "#" : "(" + std::to_string(q) + "#)^" + std::to_string(m);
    }
  }
  return out;
}

std::vector<std::uint32_t> PrimorialForm::expand(std::span<const std::uint64_t> primes) const {
  std::vector<std::uint32_t> e(primes.size(), 0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (const auto& f : factors) {
      if (f.top_prime >= primes[i]) e[i] += f.multiplicity;
    }
  }
  return e;
}

PrimorialForm to_primorial_form(const Factorization& f) {
  const auto terms = f.terms();
  PrimeGenerator gen(2);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].prime != gen.next()) {
      throw StructureError("to_primorial_form: the primes must be the first k primes");
    }
    if (i > 0 && terms[i].exponent > terms[i - 1].exponent) {
      throw StructureError("to_primorial_form: exponents must be non-increasing");
    }
  }
  PrimorialForm form;
  for (std::size_t i = terms.size(); i-- > 0;) {
    const std::uint32_t below = i + 1 < terms.size() ? terms[i + 1].exponent : 0;
    if (terms[i].exponent > below) form.factors.push_back({terms[i].prime, terms[i].exponent - below});
  }
  return form;
}

PrimorialForm to_primorial_form(const CaState& state) { return to_primorial_form(state.factorization()); }

CaReport enumerate_until(CaState& state, double target, const Interval& gamma, const CaOptions& options) {
  if (!(target >= 1) || target > 300) throw RangeError("enumerate_until: target must lie in [1, 300]");
  const auto t0 = std::chrono::steady_clock::now();
  const double stop_log_n = std::pow(10.0, target) * std::log(10.0);

  CaReport report;
  report.target_log10_exponent = target;
  report.min_log_margin = std::numeric_limits<double>::infinity();
  const std::uint64_t first_step = state.steps();

  while (state.log_n().lo() < stop_log_n) {
    next_step(state);
    if (!options.checkpoint_path.empty() && options.checkpoint_every > 0 &&
        state.steps() % options.checkpoint_every == 0) {
      save_checkpoint(state, options.checkpoint_path);
    }

    // n = 2 is the only state below e; its log log n is negative.
    if (state.log_n().hi() < 1.0) {
      report.small_violations.push_back(state.value().get_ui());
      continue;
    }
    RiVerdict v = check_ri_state(state, gamma);
    for (int k = 1; v.status == RiStatus::Indeterminate && k <= kMaxDoublings; ++k) {
      ++report.precision_retries;
      const Precision prec = (state.precision() + kGuardBits) << k;
      const Logs l = logs_at(state.primes(), state.exponents(), prec);
      v = verdict_from_logs(l.log_n, l.log_sigma_ratio, gamma.precision() >= prec ? gamma : euler_gamma(prec));
    }
    if (v.status == RiStatus::Indeterminate) {
      throw PrecisionExhausted("enumerate_until: undecided state at step " + std::to_string(state.steps()));
    }

    const bool small = state.log_n().lo() < 9.0 && state.value() <= 5040;
    if (small) {
      if (v.status == RiStatus::Violated) report.small_violations.push_back(state.value().get_ui());
      continue;
    }
    if (v.status == RiStatus::Violated) {
      if (report.violations_above_5040++ == 0) report.first_violation_step = state.steps();
      continue;
    }
    const double margin = (v.robin_side - v.sigma_side).lo();
    if (margin < report.min_log_margin) {
      report.min_log_margin = margin;
      report.min_margin_step = state.steps();
    }
  }

  report.steps = state.steps() - first_step;
  report.final_log10_n = state.log_n().mid() / std::log(10.0);
  report.largest_prime = state.primes().empty() ? 0 : state.primes().back();
  report.final_log_n_width = state.log_n().width();
  report.primorial_form = to_primorial_form(state).to_string();
  report.passed = report.violations_above_5040 == 0;
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

CaReport enumerate_until(double target, const Interval& gamma, const CaOptions& options) {
  CaState state(options.precision);
  return enumerate_until(state, target, gamma, options);
}

void save_checkpoint(const CaState& state, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["precision"] = state.precision();
  j["steps"] = state.steps();
  j["next_fresh_prime"] = state.next_fresh_prime();
  j["exponents"] = std::vector<std::uint32_t>(state.exponents().begin(), state.exponents().end());
  j["log_n"] = {{"lo", state.log_n().lower_hex()}, {"hi", state.log_n().upper_hex()}};
  j["log_sigma_ratio"] = {{"lo", state.log_sigma_ratio().lower_hex()},
                          {"hi", state.log_sigma_ratio().upper_hex()}};

  // Write beside the target, then rename, so an interrupted save never
  // leaves a truncated checkpoint.
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("save_checkpoint: cannot open " + tmp.string());
    out << j.dump() << '\n';
    if (!out) throw Error("save_checkpoint: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CaState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_checkpoint: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format").get<std::string>() != kCheckpointFormat) throw Error("load_checkpoint: not a CA checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion) throw Error("load_checkpoint: unsupported version");
    const auto prec = j.at("precision").get<Precision>();
    if (prec < 32) throw Error("load_checkpoint: bad precision");
    CaState s = CaState::from_exponents(j.at("exponents").get<std::vector<std::uint32_t>>(),
                                        j.at("steps").get<std::uint64_t>(), prec);
    if (s.next_fresh_prime() != j.at("next_fresh_prime").get<std::uint64_t>()) {
      throw Error("load_checkpoint: next fresh prime does not match the exponents");
    }
    const Interval log_n = Interval::from_hex(j.at("log_n").at("lo").get<std::string>(),
                                              j.at("log_n").at("hi").get<std::string>(), prec + kGuardBits);
    const Interval log_sigma =
        Interval::from_hex(j.at("log_sigma_ratio").at("lo").get<std::string>(),
                           j.at("log_sigma_ratio").at("hi").get<std::string>(), prec + kGuardBits);
    // Both the stored and the recomputed enclosures contain the true values.
    if (proved_less(log_n, s.log_n()) || proved_greater(log_n, s.log_n()) ||
        proved_less(log_sigma, s.log_sigma_ratio()) || proved_greater(log_sigma, s.log_sigma_ratio())) {
      throw Error("load_checkpoint: stored logarithms disagree with the exponents");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("load_checkpoint: malformed checkpoint: ") + e.what());
  } catch (const StructureError& e) {
    throw Error(std::string("load_checkpoint: ") + e.what());
  }
}

}  // namespace robin
