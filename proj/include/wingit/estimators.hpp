#pragma once

#include <cstddef>
#include <vector>

#include "wingit/markov.hpp"

namespace wingit {

/// An estimate kept as the exact fraction hits / denominator.
///
/// Whole-trajectory estimators use denominator n, the skipped estimators
/// n / (2 tau). Comparing fractions instead of doubles lets identities such
/// as WingIt(1) == Good-Turing be checked exactly.
struct Estimate {
  std::size_t hits = 0;
  std::size_t denominator = 1;

  [[nodiscard]] double value() const noexcept {
    return static_cast<double>(hits) / static_cast<double>(denominator);
  }

  /// Equal as rationals.
  friend bool operator==(const Estimate& a, const Estimate& b) noexcept {
    return static_cast<uint128>(a.hits) * b.denominator ==
           static_cast<uint128>(b.hits) * a.denominator;
  }
};

/// Good-Turing missing-mass estimate: (number of singleton symbols) / n.
[[nodiscard]] Estimate good_turing(TrajectoryView x);

/// Good-Turing small-count estimate: sum_{s=0}^{zeta} (s+1) * phi_{s+1} / n,
/// where phi_s counts the symbols occurring exactly s times.
[[nodiscard]] Estimate good_turing_small_count(TrajectoryView x, std::size_t zeta);

/// Windowed Good-Turing by the literal definition: index i contributes when
/// X_i occurs nowhere outside the window {k : |k - i| < tau}. O(n^2).
[[nodiscard]] Estimate wingit_naive(TrajectoryView x, std::size_t tau);

/// Windowed Good-Turing in O(n) time and memory.
///
/// One pass records the first and last position of every symbol; a second
/// pass counts indices i with first(X_i) > i - tau and last(X_i) < i + tau,
/// i.e. every occurrence of X_i lies inside the excluded window. tau may
/// exceed n, in which case every window covers the sequence.
[[nodiscard]] Estimate wingit(TrajectoryView x, std::size_t tau);

/// Per-index indicators 1{X_i not in X_{I_i}}, in index order (i = 1..n).
[[nodiscard]] std::vector<unsigned char> wingit_indicators(TrajectoryView x, std::size_t tau);

/// Fraction of indices whose symbol occurs at most zeta times outside its
/// window. zeta = 0 coincides with wingit(). O(n log n).
[[nodiscard]] Estimate wingit_small_count(TrajectoryView x, std::size_t tau, std::size_t zeta);

/// Literal-definition reference for wingit_small_count. O(n^2).
[[nodiscard]] Estimate wingit_small_count_naive(TrajectoryView x, std::size_t tau, std::size_t zeta);

/// Exact-count variant: small_count(zeta) - small_count(zeta - 1).
[[nodiscard]] Estimate wingit_exact_count(TrajectoryView x, std::size_t tau, std::size_t zeta);

/// Skipped estimator: average of the per-index indicators at indices
/// 2*tau*j - ell, j = 1..n/(2 tau). Requires 2*tau | n and ell < 2*tau;
/// throws std::invalid_argument otherwise.
[[nodiscard]] Estimate wingit_skipped(TrajectoryView x, std::size_t tau, std::size_t ell);

}  // namespace wingit
