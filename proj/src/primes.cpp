#include "robin/primes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "robin/constants.hpp"
#include "robin/error.hpp"

namespace robin {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> small_odd_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 3) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 3; i * i <= limit; i += 2) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j] = true;
  }
  for (std::uint64_t i = 3; i <= limit; i += 2) {
    if (!composite[i]) out.push_back(i);
  }
  return out;
}

// Interval accumulator over raw MPFR endpoints; avoids an allocation per term
// in the long prime loops.
class Accumulator {
 public:
  Accumulator(const Interval& start, Precision prec) {
    mpfr_inits2(prec, lo_, hi_, term_, static_cast<mpfr_ptr>(nullptr));
    mpfr_set(lo_, start.lower(), MPFR_RNDD);
    mpfr_set(hi_, start.upper(), MPFR_RNDU);
  }
  Accumulator(const Accumulator&) = delete;
  Accumulator& operator=(const Accumulator&) = delete;
  ~Accumulator() { mpfr_clears(lo_, hi_, term_, static_cast<mpfr_ptr>(nullptr)); }

  // += log p.  Round-to-nearest is within half an ulp of log p, so the
  // neighbouring floats enclose it.
  void add_log(std::uint64_t p) {
    mpfr_set_uj(term_, p, MPFR_RNDN);
    mpfr_log(term_, term_, MPFR_RNDN);
    mpfr_nextbelow(term_);
    mpfr_add(lo_, lo_, term_, MPFR_RNDD);
    mpfr_nextabove(term_);
    mpfr_nextabove(term_);
    mpfr_add(hi_, hi_, term_, MPFR_RNDU);
  }

  // *= p / (p - 1)
  void mul_ratio(std::uint64_t p) {
    mpfr_mul_ui(lo_, lo_, p, MPFR_RNDD);
    mpfr_div_ui(lo_, lo_, p - 1, MPFR_RNDD);
    mpfr_mul_ui(hi_, hi_, p, MPFR_RNDU);
    mpfr_div_ui(hi_, hi_, p - 1, MPFR_RNDU);
  }

  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }
  Interval value(Precision prec) const { return Interval::from_endpoints(lo_, hi_, prec); }

 private:
  mpfr_t lo_, hi_, term_;
};

constexpr std::array<char, 8> kCacheMagic = {'R', 'B', 'N', 'P', 'R', 'I', 'M', 'E'};
constexpr std::uint32_t kCacheVersion = 1;

struct CacheHeader {
  std::array<char, 8> magic;
  std::uint32_t version;
  std::uint32_t reserved;
  std::uint64_t limit;
  std::uint64_t count;
  std::uint64_t checksum;
};

std::uint64_t fnv1a(std::span<const std::uint64_t> values) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint64_t v : values) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& fn,
                    std::uint64_t segment_size) {
  if (hi < 2 || lo > hi) return;
  if (lo <= 2) fn(2);
  if (hi < 3) return;
  segment_size = std::max<std::uint64_t>(segment_size & ~std::uint64_t{1}, 64);

  const std::vector<std::uint64_t> base = small_odd_primes(isqrt(hi));
  std::uint64_t start = std::max<std::uint64_t>(lo, 3);
  if (start % 2 == 0) ++start;

  std::vector<std::uint8_t> is_prime;
  for (std::uint64_t seg_lo = start; seg_lo <= hi;) {
    const std::uint64_t seg_hi = (hi - seg_lo < segment_size - 1) ? hi : seg_lo + segment_size - 1;
    const std::uint64_t odds = (seg_hi - seg_lo) / 2 + 1;  // seg_lo, seg_lo + 2, ...
    is_prime.assign(odds, 1);
    for (std::uint64_t q : base) {
      if (q * q > seg_hi) break;
      std::uint64_t m = std::max(q * q, (seg_lo + q - 1) / q * q);
      if (m % 2 == 0) m += q;
      for (std::uint64_t i = (m - seg_lo) / 2; i < odds; i += q) is_prime[i] = 0;
    }
    for (std::uint64_t i = 0; i < odds; ++i) {
      if (is_prime[i]) fn(seg_lo + 2 * i);
    }
    if (seg_hi == hi) break;
    seg_lo = seg_hi + 1;
    if (seg_lo % 2 == 0) ++seg_lo;
  }
}

PrimeGenerator::PrimeGenerator(std::uint64_t start, std::uint64_t segment_size)
    : segment_size_(std::max<std::uint64_t>(segment_size, 64)), next_lo_(start) {}

std::uint64_t PrimeGenerator::next() {
  while (pos_ == buffer_.size()) refill();
  return buffer_[pos_++];
}

void PrimeGenerator::refill() {
  buffer_.clear();
  pos_ = 0;
  const std::uint64_t hi = next_lo_ + segment_size_ - 1;
  for_each_prime(next_lo_, hi, [this](std::uint64_t p) { buffer_.push_back(p); }, segment_size_);
  next_lo_ = hi + 1;
}

struct PrimeTable::Prefixes {
  std::once_flag once;
  std::vector<Interval> theta;     // theta[j]: sum over the first j * stride primes
  std::vector<Interval> mertens;   // same indexing for the Mertens product
};

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes, Precision prec)
    : limit_(limit), primes_(std::move(primes)), precision_(prec), prefixes_(std::make_unique<Prefixes>()) {}

PrimeTable::PrimeTable(PrimeTable&&) noexcept = default;
PrimeTable& PrimeTable::operator=(PrimeTable&&) noexcept = default;
PrimeTable::~PrimeTable() = default;

std::size_t PrimeTable::count_upto(std::uint64_t x) const {
  if (x > limit_) throw OutOfRange("count_upto: " + std::to_string(x) + " exceeds table limit");
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

const PrimeTable::Prefixes& PrimeTable::prefixes() const {
  std::call_once(prefixes_->once, [this] {
    const Precision work = precision_ + 32;
    Accumulator th(Interval(0L, work), work);
    Accumulator me(Interval(1L, work), work);
    auto& out = *prefixes_;
    out.theta.reserve(primes_.size() / kCheckpointStride + 1);
    out.mertens.reserve(primes_.size() / kCheckpointStride + 1);
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (i % kCheckpointStride == 0) {
        out.theta.push_back(th.value(work));
        out.mertens.push_back(me.value(work));
      }
      th.add_log(primes_[i]);
      me.mul_ratio(primes_[i]);
    }
    if (primes_.size() % kCheckpointStride == 0) {
      out.theta.push_back(th.value(work));
      out.mertens.push_back(me.value(work));
    }
  });
  return *prefixes_;
}

Interval PrimeTable::theta_prefix(std::size_t index) const {
  if (index >= primes_.size()) throw OutOfRange("theta_prefix: index past table end");
  const auto& pre = prefixes();
  const std::size_t block = (index + 1) / kCheckpointStride;
  Accumulator acc(pre.theta[block], precision_ + 32);
  for (std::size_t i = block * kCheckpointStride; i <= index; ++i) acc.add_log(primes_[i]);
  return acc.value(precision_);
}

Interval PrimeTable::mertens_prefix(std::size_t index) const {
  if (index >= primes_.size()) throw OutOfRange("mertens_prefix: index past table end");
  const auto& pre = prefixes();
  const std::size_t block = (index + 1) / kCheckpointStride;
  Accumulator acc(pre.mertens[block], precision_ + 32);
  for (std::size_t i = block * kCheckpointStride; i <= index; ++i) acc.mul_ratio(primes_[i]);
  return acc.value(precision_);
}

std::size_t estimated_table_bytes(std::uint64_t limit) {
  if (limit < 17) return 64;
  // pi(x) < 1.25506 x / log x for x > 1.
  const double count = 1.25506 * static_cast<double>(limit) / std::log(static_cast<double>(limit));
  const double checkpoints = count / PrimeTable::kCheckpointStride * 2 * 128;
  return static_cast<std::size_t>(count * sizeof(std::uint64_t) + checkpoints) + 64;
}

PrimeTable sieve(std::uint64_t limit, const SieveOptions& options) {
  if (limit < 2) throw RangeError("sieve: limit must be >= 2");
  const std::size_t need = estimated_table_bytes(limit);
  if (need > options.memory_budget) {
    throw ResourceError("sieve: limit " + std::to_string(limit) + " needs ~" + std::to_string(need) +
                        " bytes, budget is " + std::to_string(options.memory_budget));
  }
  std::vector<std::uint64_t> primes;
  primes.reserve(need / sizeof(std::uint64_t));
  for_each_prime(2, limit, [&primes](std::uint64_t p) { primes.push_back(p); }, options.segment_size);
  primes.shrink_to_fit();
  return PrimeTable(limit, std::move(primes), options.precision);
}

Interval theta(std::uint64_t x, const PrimeTable& table) {
  const std::size_t k = table.count_upto(x);
  if (k == 0) return Interval(0L, table.precision());
  return table.theta_prefix(k - 1);
}

Interval primorial_log(std::size_t n, const PrimeTable& table) {
  if (n > table.size()) throw OutOfRange("primorial_log: index past table end");
  if (n == 0) return Interval(0L, table.precision());
  return table.theta_prefix(n - 1);
}

Interval mertens_product(std::uint64_t x, const PrimeTable& table) {
  const std::size_t k = table.count_upto(x);
  if (k == 0) return Interval(1L, table.precision());
  return table.mertens_prefix(k - 1);
}

Interval mertens_product_streamed(std::uint64_t x, Precision prec) {
  const std::uint64_t xs[] = {x};
  return mertens_products_streamed(xs, prec).front();
}

std::vector<Interval> mertens_products_streamed(std::span<const std::uint64_t> xs, Precision prec) {
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  std::vector<Interval> out(xs.size(), Interval(1L, prec));
  if (xs.empty()) return out;
  const Precision work = prec + 32;
  Accumulator acc(Interval(1L, work), work);
  std::size_t next = 0;
  auto emit_upto = [&](std::uint64_t bound) {
    while (next < order.size() && xs[order[next]] < bound) out[order[next++]] = acc.value(prec);
  };
  for_each_prime(2, xs[order.back()], [&](std::uint64_t p) {
    emit_upto(p);
    acc.mul_ratio(p);
  });
  emit_upto(std::numeric_limits<std::uint64_t>::max());
  return out;
}

Interval theta_error_bound(const Interval& x) {
  const Interval lx = log(x);
  return sqrt(x) * square(lx) / (pi(x.precision()) * 8UL);
}

ThetaCheckReport theta_bound_check(std::uint64_t x_min, std::uint64_t x_max, const PrimeTable& table) {
  if (x_min < 599) throw RangeError("theta_bound_check: x_min must be >= 599");
  if (x_min >= x_max) throw RangeError("theta_bound_check: need x_min < x_max");
  if (x_max > table.limit()) throw OutOfRange("theta_bound_check: x_max exceeds table limit");

  ThetaCheckReport report;
  report.x_min = x_min;
  report.x_max = x_max;
  report.min_slack = HUGE_VAL;
  report.min_relative_slack = HUGE_VAL;

  const Precision work = table.precision() + 32;
  Accumulator acc(theta(x_min - 1, table).with_precision(work), work);
  mpfr_t dev;
  mpfr_init2(dev, work);

  // |theta - x| <= bound at one point, with theta enclosed by acc.
  auto check = [&](std::uint64_t x) {
    ++report.points_checked;
    mpfr_sub_ui(dev, acc.upper(), x, MPFR_RNDU);
    double worst = mpfr_get_d(dev, MPFR_RNDU);
    mpfr_ui_sub(dev, x, acc.lower(), MPFR_RNDU);
    worst = std::max(worst, mpfr_get_d(dev, MPFR_RNDU));

    const double xd = static_cast<double>(x);
    const double lx = std::log(xd);
    const double bound = std::sqrt(xd) * lx * lx / (8 * std::numbers::pi);
    const double slack = bound - worst;
    if (slack < report.min_slack) {
      report.min_slack = slack;
      report.min_slack_at = x;
    }
    if (slack / bound < report.min_relative_slack) {
      report.min_relative_slack = slack / bound;
      report.min_relative_slack_at = x;
    }
    // libm results are within a few ulps; a 1e-9 relative cushion is far
    // outside that, anything closer is settled in interval arithmetic.
    if (worst < bound * (1 - 1e-9)) return;
    ++report.interval_fallbacks;
    const Interval rigorous = theta_error_bound(Interval::from_uint(x, work));
    Interval deviation = hull(acc.value(work) - Interval::from_uint(x, work),
                              Interval::from_uint(x, work) - acc.value(work));
    if (!mpfr_lessequal_p(deviation.upper(), rigorous.lower())) {
      if (report.violations++ == 0) report.first_violation = x;
    }
  };

  const auto primes = table.primes();
  std::size_t idx = table.count_upto(x_min - 1);
  if (idx >= primes.size() || primes[idx] != x_min) check(x_min);
  for (; idx < primes.size() && primes[idx] <= x_max; ++idx) {
    const std::uint64_t p = primes[idx];
    if (p != x_min) check(p);  // left limit theta(p-)
    acc.add_log(p);
    check(p);
  }
  if (table.count_upto(x_max) == table.count_upto(x_max - 1)) check(x_max);

  mpfr_clear(dev);
  report.passed = report.violations == 0;
  return report;
}

void save_prime_cache(const PrimeTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("save_prime_cache: cannot open " + path.string());
  CacheHeader h{};
  h.magic = kCacheMagic;
  h.version = kCacheVersion;
  h.limit = table.limit();
  h.count = table.size();
  h.checksum = fnv1a(table.primes());
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  out.write(reinterpret_cast<const char*>(table.primes().data()),
            static_cast<std::streamsize>(table.size() * sizeof(std::uint64_t)));
  if (!out) throw Error("save_prime_cache: write failed for " + path.string());
}

PrimeTable load_prime_cache(const std::filesystem::path& path, Precision prec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("load_prime_cache: cannot open " + path.string());
  CacheHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!in || h.magic != kCacheMagic) throw Error("load_prime_cache: bad magic in " + path.string());
  if (h.version != kCacheVersion) throw Error("load_prime_cache: unsupported version " + std::to_string(h.version));
  std::vector<std::uint64_t> primes(h.count);
  in.read(reinterpret_cast<char*>(primes.data()), static_cast<std::streamsize>(h.count * sizeof(std::uint64_t)));
  if (!in) throw Error("load_prime_cache: truncated file " + path.string());
  if (fnv1a(primes) != h.checksum) throw Error("load_prime_cache: checksum mismatch in " + path.string());
  if (!primes.empty() && primes.back() > h.limit) throw Error("load_prime_cache: prime beyond stated limit");
  return PrimeTable(h.limit, std::move(primes), prec);
}

}  // namespace robin
