#pragma once

#include <cstddef>
#include <vector>

#include "wingit/estimators.hpp"
#include "wingit/markov.hpp"

namespace wingit {

/// Window-size selection by split-and-validate.
///
/// The sequence is cut into thirds. The held-out estimate is the fraction of
/// final-third symbols that never occur in the first third. Candidate windows
/// are tried in increasing order on the first third alone, and the first one
/// whose WingIt estimate is within sqrt(c_tune * tau / floor(n/3)) of the
/// held-out estimate wins. When n is not a multiple of 3 the thirds have length
/// floor(n/3) and the leftover middle symbols are ignored.
struct TuneConfig {
  double c_tune = 1.0;
  /// Candidate windows. Empty means default_tuning_grid(n).
  std::vector<std::size_t> grid;
};

struct CriterionValue {
  std::size_t tau;
  double lhs;  ///< |WingIt(first third; tau) - held-out|^2
  double rhs;  ///< c_tune * tau / floor(n/3)
};

struct TuneResult {
  std::size_t tau_hat;
  /// One entry per grid element examined, up to and including the winner.
  std::vector<CriterionValue> criterion_values;
  Estimate holdout_estimate;
  bool fell_back = false;  ///< no grid element qualified; tau_hat = floor(n/6)
};

inline constexpr std::size_t kMinTuningLength = 18;

/// Fraction of the last floor(n/3) symbols absent from the first floor(n/3).
[[nodiscard]] Estimate holdout_mass_estimate(TrajectoryView x);

/// 1, 2, 4, ..., 2^floor(log2(n/6)).
[[nodiscard]] std::vector<std::size_t> default_tuning_grid(std::size_t n);

/// Throws std::invalid_argument for n < 18, c_tune <= 0, or a grid that is
/// not strictly increasing with every element in [1, n/6].
[[nodiscard]] TuneResult tune_window(TrajectoryView x, const TuneConfig& cfg = {});

}  // namespace wingit
