#include "wingit/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wingit/summation.hpp"

namespace wingit {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size == 0) throw std::invalid_argument("alphabet size must be at least 1");
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("distribution must be nonempty");
  CompensatedSum total;
  cdf_.reserve(probs_.size());
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double v = probs_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("distribution entry " + std::to_string(i) + " outside [0,1]");
    }
    total.add(v);
    cdf_.push_back(total.value());
  }
  if (std::abs(total.value() - 1.0) > kSumTolerance) {
    throw std::invalid_argument("distribution does not sum to 1");
  }
}

Distribution Distribution::uniform(std::size_t k) {
  if (k == 0) throw std::invalid_argument("uniform distribution needs k >= 1");
  return Distribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Symbol Distribution::sample(double unit) const noexcept {
  const double target = unit * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  const auto idx = static_cast<std::size_t>(it - cdf_.begin());
  return static_cast<Symbol>(std::min(idx, cdf_.size() - 1));
}

Trajectory::Trajectory(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("trajectory must have length n >= 1");
}

MarkovModel::MarkovModel(Alphabet alphabet, Distribution stationary,
                         std::variant<StickyKernel, DenseKernel> kernel)
    : alphabet_(alphabet), stationary_(std::move(stationary)), kernel_(std::move(kernel)) {}

MarkovModel MarkovModel::sticky(double p, Distribution pi) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("sticky chain needs p in (0, 1]");
  Alphabet alphabet(pi.size());
  return MarkovModel(alphabet, std::move(pi), StickyKernel{p});
}

MarkovModel MarkovModel::dense(std::vector<std::vector<double>> rows, Distribution stationary) {
  const std::size_t k = rows.size();
  if (k == 0) throw std::invalid_argument("transition matrix must be nonempty");
  if (stationary.size() != k) {
    throw std::invalid_argument("stationary distribution size does not match transition matrix");
  }
  DenseKernel kernel;
  kernel.entries.reserve(k * k);
  kernel.cdfs.reserve(k * k);
  for (std::size_t r = 0; r < k; ++r) {
    if (rows[r].size() != k) {
      throw std::invalid_argument("transition row " + std::to_string(r) + " has wrong length");
    }
    CompensatedSum sum;
    for (double v : rows[r]) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("transition row " + std::to_string(r) + " has entry outside [0,1]");
      }
      sum.add(v);
      kernel.entries.push_back(v);
      kernel.cdfs.push_back(sum.value());
    }
    if (std::abs(sum.value() - 1.0) > kRowTolerance) {
      throw std::invalid_argument("transition row " + std::to_string(r) + " does not sum to 1");
    }
  }
  MarkovModel model(Alphabet(k), std::move(stationary), std::move(kernel));

  std::vector<double> pushed(k);
  model.push_forward(model.stationary_.probs(), pushed);
  for (std::size_t y = 0; y < k; ++y) {
    if (std::abs(pushed[y] - model.stationary_[static_cast<Symbol>(y)]) > kStationaryTolerance) {
      throw std::invalid_argument("stationary distribution is not invariant under the transition matrix");
    }
  }
  return model;
}

std::optional<double> MarkovModel::sticky_p() const noexcept {
  if (const auto* s = std::get_if<StickyKernel>(&kernel_)) return s->p;
  return std::nullopt;
}

double MarkovModel::transition(Symbol from, Symbol to) const {
  const std::size_t k = alphabet_.size();
  if (from >= k || to >= k) throw std::out_of_range("symbol outside alphabet");
  if (const auto* s = std::get_if<StickyKernel>(&kernel_)) {
    return (from == to ? 1.0 - s->p : 0.0) + s->p * stationary_[to];
  }
  return std::get<DenseKernel>(kernel_).entries[from * k + to];
}

std::vector<double> MarkovModel::transition_row(Symbol from) const {
  std::vector<double> row(alphabet_.size());
  for (std::size_t y = 0; y < row.size(); ++y) row[y] = transition(from, static_cast<Symbol>(y));
  return row;
}

void MarkovModel::push_forward(std::span<const double> in, std::span<double> out) const {
  const std::size_t k = alphabet_.size();
  if (in.size() != k || out.size() != k) throw std::invalid_argument("push_forward size mismatch");
  if (const auto* s = std::get_if<StickyKernel>(&kernel_)) {
    const double mass = compensated_sum(in);
    const auto pi = stationary_.probs();
    for (std::size_t y = 0; y < k; ++y) out[y] = (1.0 - s->p) * in[y] + s->p * mass * pi[y];
    return;
  }
  const auto& entries = std::get<DenseKernel>(kernel_).entries;
  std::vector<CompensatedSum> acc(k);
  for (std::size_t x = 0; x < k; ++x) {
    if (in[x] == 0.0) continue;
    const double* row = entries.data() + x * k;
    for (std::size_t y = 0; y < k; ++y) acc[y].add(in[x] * row[y]);
  }
  for (std::size_t y = 0; y < k; ++y) out[y] = acc[y].value();
}

Symbol MarkovModel::step(Symbol current, CounterRng& rng) const {
  if (const auto* s = std::get_if<StickyKernel>(&kernel_)) {
    const double move = rng.next_unit();
    const double pick = rng.next_unit();
    return move < s->p ? stationary_.sample(pick) : current;
  }
  const std::size_t k = alphabet_.size();
  const auto& cdfs = std::get<DenseKernel>(kernel_).cdfs;
  const auto first = cdfs.begin() + static_cast<std::ptrdiff_t>(current * k);
  const auto last = first + static_cast<std::ptrdiff_t>(k);
  const double target = rng.next_unit() * *(last - 1);
  const auto idx = static_cast<std::size_t>(std::upper_bound(first, last, target) - first);
  return static_cast<Symbol>(std::min(idx, k - 1));
}

MarkovModel build_sticky_chain(double p, Distribution pi) { return MarkovModel::sticky(p, std::move(pi)); }

MarkovModel build_iid_chain(Distribution pi) { return MarkovModel::sticky(1.0, std::move(pi)); }

Trajectory sample_trajectory(const MarkovModel& model, std::size_t n, Seed seed) {
  if (n == 0) throw std::invalid_argument("trajectory length n must be >= 1");
  CounterRng rng(seed);
  std::vector<Symbol> symbols;
  symbols.reserve(n);
  symbols.push_back(model.stationary().sample(rng.next_unit()));
  for (std::size_t t = 1; t < n; ++t) symbols.push_back(model.step(symbols.back(), rng));
  return Trajectory(std::move(symbols));
}

namespace {

double tv_distance(std::span<const double> a, std::span<const double> b) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < a.size(); ++i) sum.add(std::abs(a[i] - b[i]));
  return 0.5 * sum.value();
}

}  // namespace

std::uint64_t mixing_time(const MarkovModel& model, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2]");
  const std::size_t k = model.alphabet().size();
  if (k > kMixingTimeAlphabetCap) {
    throw std::length_error("exact mixing time unavailable at this size: alphabet " + std::to_string(k) +
                            " exceeds cap " + std::to_string(kMixingTimeAlphabetCap));
  }
  const auto pi = model.stationary().probs();
  std::vector<double> current(k);
  std::vector<double> next(k);
  std::uint64_t worst = 0;
  for (std::size_t x = 0; x < k; ++x) {
    std::fill(current.begin(), current.end(), 0.0);
    current[x] = 1.0;
    // t = 0 is never reported; the mixing time is a positive integer.
    std::uint64_t t = 0;
    do {
      if (t == kMixingTimeStepCap) {
        throw std::length_error("exact mixing time unavailable: no t <= " + std::to_string(kMixingTimeStepCap));
      }
      model.push_forward(current, next);
      current.swap(next);
      ++t;
    } while (tv_distance(current, pi) > epsilon);
    worst = std::max(worst, t);
  }
  return worst;
}

MixingBounds sticky_mixing_bounds(double p) {
  if (!(p > 0.0 && p <= 0.5)) throw std::invalid_argument("sticky mixing bounds need p in (0, 1/2]");
  return MixingBounds{1.0 / (2.0 * p), 2.0 / p};
}

}  // namespace wingit
