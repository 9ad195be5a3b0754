#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "wingit/rng.hpp"

namespace wingit {

/// Dense symbol identifier, 0..alphabet_size-1.
using Symbol = std::uint32_t;

/// Read-only view of an observed sequence. Estimators take views so that
/// prefixes and windows of a trajectory need no copy.
using TrajectoryView = std::span<const Symbol>;

class Alphabet {
 public:
  explicit Alphabet(std::size_t size);
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool contains(Symbol s) const noexcept { return s < size_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
};

/// Probability vector over an alphabet, validated on construction.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Throws std::invalid_argument unless every entry lies in [0,1] and the
  /// entries sum to 1 within kSumTolerance.
  explicit Distribution(std::vector<double> probs);

  [[nodiscard]] static Distribution uniform(std::size_t k);

  [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
  [[nodiscard]] double operator[](Symbol s) const { return probs_[s]; }
  [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }

  /// Inverse-CDF draw: the smallest symbol whose cumulative mass exceeds u.
  [[nodiscard]] Symbol sample(double unit) const noexcept;

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// A trajectory X_1..X_n. Never empty.
class Trajectory {
 public:
  explicit Trajectory(std::vector<Symbol> symbols);

  [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
  [[nodiscard]] Symbol operator[](std::size_t i) const { return symbols_[i]; }
  [[nodiscard]] TrajectoryView view() const noexcept { return symbols_; }
  operator TrajectoryView() const noexcept { return symbols_; }  // NOLINT(google-explicit-constructor)
  [[nodiscard]] const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

  [[nodiscard]] auto begin() const noexcept { return symbols_.begin(); }
  [[nodiscard]] auto end() const noexcept { return symbols_.end(); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Finite-state Markov chain with a known stationary law.
///
/// Two kernel representations are kept. Sticky chains (1-p)I + p*1*pi^T are
/// stored in factored form so that alphabets of size ~10^4 cost O(k) memory;
/// arbitrary chains are stored densely. Immutable after construction.
class MarkovModel {
 public:
  static constexpr double kRowTolerance = 1e-12;
  static constexpr double kStationaryTolerance = 1e-9;

  /// Sticky (lazy) chain: stay with probability 1-p, else redraw from pi.
  /// p must lie in (0, 1]; p = 1 is the i.i.d. chain.
  [[nodiscard]] static MarkovModel sticky(double p, Distribution pi);

  /// General chain from row-stochastic `rows` and its stationary law.
  [[nodiscard]] static MarkovModel dense(std::vector<std::vector<double>> rows,
                                         Distribution stationary);

  [[nodiscard]] const Alphabet& alphabet() const noexcept { return alphabet_; }
  [[nodiscard]] const Distribution& stationary() const noexcept { return stationary_; }

  /// The stay-or-redraw parameter p when the chain is sticky.
  [[nodiscard]] std::optional<double> sticky_p() const noexcept;

  [[nodiscard]] double transition(Symbol from, Symbol to) const;
  [[nodiscard]] std::vector<double> transition_row(Symbol from) const;

  /// out = in^T P. Spans must both have alphabet size.
  void push_forward(std::span<const double> in, std::span<double> out) const;

  /// One transition from `current`, consuming draws from `rng`.
  [[nodiscard]] Symbol step(Symbol current, CounterRng& rng) const;

 private:
  struct StickyKernel {
    double p;
  };
  struct DenseKernel {
    std::vector<double> entries;  // row-major k x k
    std::vector<double> cdfs;     // per-row cumulative sums, row-major
  };

  MarkovModel(Alphabet alphabet, Distribution stationary,
              std::variant<StickyKernel, DenseKernel> kernel);

  Alphabet alphabet_;
  Distribution stationary_;
  std::variant<StickyKernel, DenseKernel> kernel_;
};

[[nodiscard]] MarkovModel build_sticky_chain(double p, Distribution pi);
[[nodiscard]] MarkovModel build_iid_chain(Distribution pi);

/// X_1 ~ stationary, X_{t+1} ~ row X_t. Pure function of its arguments.
[[nodiscard]] Trajectory sample_trajectory(const MarkovModel& model, std::size_t n, Seed seed);

/// Largest alphabet for which mixing_time will run.
inline constexpr std::size_t kMixingTimeAlphabetCap = 4096;
inline constexpr std::uint64_t kMixingTimeStepCap = 1'000'000;

/// min{t : max_x TV(e_x^T P^t, pi) <= epsilon}, epsilon in (0, 1/2].
///
/// Each start state is pushed forward until its TV distance drops to
/// epsilon; TV to stationarity is nonincreasing in t, so the answer is the
/// largest of these per-start hitting times. Throws std::length_error when
/// the alphabet exceeds kMixingTimeAlphabetCap or no t <= kMixingTimeStepCap
/// qualifies.
[[nodiscard]] std::uint64_t mixing_time(const MarkovModel& model, double epsilon);

struct MixingBounds {
  double lower;
  double upper;
};

/// (1/(2p), 2/p): the sandwich on t_mix(1/4) for sticky chains, p in (0, 1/2].
[[nodiscard]] MixingBounds sticky_mixing_bounds(double p);

}  // namespace wingit
