#include "wingit/estimators.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>

#if defined(__linux__)
#include <sys/mman.h>
#endif

#include "wingit/functionals.hpp"

namespace wingit {

namespace {

void require_nonempty(TrajectoryView x) {
  if (x.empty()) throw std::invalid_argument("trajectory must have length n >= 1");
  if (x.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("trajectory longer than 2^32 - 1 symbols");
  }
}

void require_window(std::size_t tau) {
  if (tau == 0) throw std::invalid_argument("window size tau must be >= 1");
}

// First and last 1-based position of a symbol; first == 0 means unseen.
struct Span {
  std::uint32_t first = 0;
  std::uint32_t last = 0;
};

// Zero-initialized array of spans. Large tables are backed by transparent
// huge pages where available, which cuts TLB misses on random lookups.
class SpanTable {
 public:
  SpanTable() = default;
  explicit SpanTable(std::size_t size) : size_(size) {
    const std::size_t bytes = size * sizeof(Span);
#if defined(__linux__)
    if (bytes >= kHugeThreshold) {
      const std::size_t rounded = (bytes + kHugePage - 1) / kHugePage * kHugePage;
      if (void* p = std::aligned_alloc(kHugePage, rounded)) {
        madvise(p, rounded, MADV_HUGEPAGE);
        std::memset(p, 0, rounded);
        data_.reset(static_cast<Span*>(p));
        return;
      }
    }
#endif
    void* p = std::calloc(size, sizeof(Span));
    if (p == nullptr) throw std::bad_alloc();
    data_.reset(static_cast<Span*>(p));
  }

  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }
  Span& operator[](std::size_t i) noexcept { return data_.get()[i]; }
  const Span& operator[](std::size_t i) const noexcept { return data_.get()[i]; }

 private:
  static constexpr std::size_t kHugePage = std::size_t{2} << 20;
  static constexpr std::size_t kHugeThreshold = std::size_t{4} << 20;

  struct Free {
    void operator()(Span* p) const noexcept { std::free(p); }
  };

  std::unique_ptr<Span, Free> data_;
  std::size_t size_ = 0;
};

// The `locations` dictionary, reduced to the two ends of each list. Symbol
// ids produced by the samplers and the interner are dense, so a flat table
// is used whenever the id range is O(n); otherwise fall back to hashing.
class Locations {
 public:
  explicit Locations(TrajectoryView x) {
    const Symbol max_symbol = *std::max_element(x.begin(), x.end());
    if (static_cast<std::size_t>(max_symbol) <= 4 * x.size() + 1024) {
      flat_ = SpanTable(static_cast<std::size_t>(max_symbol) + 1);
      record(x, [this](Symbol s) -> Span& { return flat_[s]; }, [this](Symbol s) { prefetch(&flat_[s]); });
    } else {
      hashed_.reserve(x.size());
      record(x, [this](Symbol s) -> Span& { return hashed_[s]; }, [](Symbol) {});
    }
  }

  // Every index i with X_i = x satisfies first(x) > i - tau and last(x) < i + tau.
  template <typename Visit>
  void for_each_isolated(TrajectoryView x, std::size_t tau, Visit&& visit) const {
    if (!flat_.empty()) {
      scan(x, tau, [this](Symbol s) { return flat_[s]; }, [this](Symbol s) { prefetch(&flat_[s]); }, visit);
    } else {
      scan(x, tau, [this](Symbol s) { return hashed_.at(s); }, [](Symbol) {}, visit);
    }
  }

 private:
  // Table lookups are random accesses; issuing them a few iterations early
  // overlaps the cache misses once the table outgrows the cache.
  static constexpr std::size_t kPrefetchDistance = 16;

  static void prefetch(const Span* p) { __builtin_prefetch(p); }

  template <typename Lookup, typename Prefetch>
  static void record(TrajectoryView x, Lookup&& slot, Prefetch&& ahead) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i + kPrefetchDistance < x.size()) ahead(x[i + kPrefetchDistance]);
      Span& span = slot(x[i]);
      const auto pos = static_cast<std::uint32_t>(i + 1);
      if (span.first == 0) span.first = pos;
      span.last = pos;
    }
  }

  template <typename Lookup, typename Prefetch, typename Visit>
  static void scan(TrajectoryView x, std::size_t tau, Lookup&& lookup, Prefetch&& ahead, Visit& visit) {
    for (std::size_t i = 1; i <= x.size(); ++i) {
      if (i - 1 + kPrefetchDistance < x.size()) ahead(x[i - 1 + kPrefetchDistance]);
      const Span span = lookup(x[i - 1]);
      // first > i - tau, rearranged to stay unsigned.
      visit(i, span.first + tau > i && span.last < i + tau);
    }
  }

  SpanTable flat_;
  std::unordered_map<Symbol, Span> hashed_;
};

// Frequencies of frequencies summary: count of each symbol.
std::vector<std::size_t> symbol_counts(TrajectoryView x) {
  std::unordered_map<Symbol, std::size_t> counts;
  counts.reserve(x.size());
  for (Symbol s : x) ++counts[s];
  std::vector<std::size_t> out;
  out.reserve(counts.size());
  for (const auto& [symbol, c] : counts) out.push_back(c);
  return out;
}

// Occurrences of x[i-1] outside the window around 1-based index i, capped
// at `limit + 1` (callers only compare against limit).
std::size_t naive_outside_count(TrajectoryView x, std::size_t i, std::size_t tau, std::size_t limit) {
  std::size_t found = 0;
  for (std::size_t k = 1; k <= x.size(); ++k) {
    const std::size_t gap = k > i ? k - i : i - k;
    if (gap < tau) continue;
    if (x[k - 1] == x[i - 1] && ++found > limit) break;
  }
  return found;
}

}  // namespace

Estimate good_turing(TrajectoryView x) {
  require_nonempty(x);
  std::size_t singletons = 0;
  for (std::size_t c : symbol_counts(x)) singletons += (c == 1);
  return Estimate{singletons, x.size()};
}

Estimate good_turing_small_count(TrajectoryView x, std::size_t zeta) {
  require_nonempty(x);
  // sum_{s=0}^{zeta} (s+1) phi_{s+1}: each symbol with count c in [1, zeta+1]
  // contributes c.
  std::size_t hits = 0;
  for (std::size_t c : symbol_counts(x)) {
    if (c <= zeta + 1) hits += c;
  }
  return Estimate{hits, x.size()};
}

Estimate wingit_naive(TrajectoryView x, std::size_t tau) {
  require_nonempty(x);
  require_window(tau);
  std::size_t hits = 0;
  for (std::size_t i = 1; i <= x.size(); ++i) hits += (naive_outside_count(x, i, tau, 0) == 0);
  return Estimate{hits, x.size()};
}

Estimate wingit(TrajectoryView x, std::size_t tau) {
  require_nonempty(x);
  require_window(tau);
  const Locations locations(x);
  std::size_t hits = 0;
  locations.for_each_isolated(x, tau, [&hits](std::size_t, bool isolated) { hits += isolated; });
  return Estimate{hits, x.size()};
}

std::vector<unsigned char> wingit_indicators(TrajectoryView x, std::size_t tau) {
  require_nonempty(x);
  require_window(tau);
  const Locations locations(x);
  std::vector<unsigned char> out(x.size());
  locations.for_each_isolated(x, tau, [&out](std::size_t i, bool isolated) { out[i - 1] = isolated; });
  return out;
}

Estimate wingit_small_count(TrajectoryView x, std::size_t tau, std::size_t zeta) {
  require_nonempty(x);
  require_window(tau);
  const std::size_t n = x.size();
  const OccurrenceIndex index(x);
  std::size_t hits = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const Symbol s = x[i - 1];
    const std::size_t lo = i >= tau ? i - tau + 1 : 1;
    const std::size_t hi = std::min(n, i + tau - 1);
    const std::size_t outside = index.count(s) - index.count_between(s, lo, hi);
    hits += (outside <= zeta);
  }
  return Estimate{hits, n};
}

Estimate wingit_small_count_naive(TrajectoryView x, std::size_t tau, std::size_t zeta) {
  require_nonempty(x);
  require_window(tau);
  std::size_t hits = 0;
  for (std::size_t i = 1; i <= x.size(); ++i) hits += (naive_outside_count(x, i, tau, zeta) <= zeta);
  return Estimate{hits, x.size()};
}

Estimate wingit_exact_count(TrajectoryView x, std::size_t tau, std::size_t zeta) {
  const Estimate upper = wingit_small_count(x, tau, zeta);
  if (zeta == 0) return upper;
  const Estimate lower = wingit_small_count(x, tau, zeta - 1);
  return Estimate{upper.hits - lower.hits, x.size()};
}

Estimate wingit_skipped(TrajectoryView x, std::size_t tau, std::size_t ell) {
  require_nonempty(x);
  require_window(tau);
  const std::size_t n = x.size();
  const std::size_t stride = 2 * tau;
  if (n % stride != 0) throw std::invalid_argument("skipped estimator needs 2*tau to divide n");
  if (ell >= stride) throw std::invalid_argument("skipped estimator needs ell in [0, 2*tau - 1]");
  const auto indicators = wingit_indicators(x, tau);
  const std::size_t n0 = n / stride;
  std::size_t hits = 0;
  for (std::size_t j = 1; j <= n0; ++j) hits += indicators[stride * j - ell - 1];
  return Estimate{hits, n0};
}

}  // namespace wingit
