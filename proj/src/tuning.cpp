#include "wingit/tuning.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace wingit {

Estimate holdout_mass_estimate(TrajectoryView x) {
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("held-out estimate needs n >= 3");
  const std::size_t third = n / 3;
  const std::unordered_set<Symbol> head(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(third));
  std::size_t unseen = 0;
  for (std::size_t i = n - third; i < n; ++i) unseen += !head.contains(x[i]);
  return Estimate{unseen, third};
}

std::vector<std::size_t> default_tuning_grid(std::size_t n) {
  std::vector<std::size_t> grid;
  for (std::size_t tau = 1; 6 * tau <= n; tau *= 2) grid.push_back(tau);
  return grid;
}

TuneResult tune_window(TrajectoryView x, const TuneConfig& cfg) {
  const std::size_t n = x.size();
  if (n < kMinTuningLength) throw std::invalid_argument("tuning needs n >= 18");
  if (!(cfg.c_tune > 0.0)) throw std::invalid_argument("c_tune must be positive");
  const std::vector<std::size_t> grid = cfg.grid.empty() ? default_tuning_grid(n) : cfg.grid;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] == 0 || 6 * grid[k] > n) throw std::invalid_argument("tuning grid element outside [1, n/6]");
    if (k > 0 && grid[k] <= grid[k - 1]) throw std::invalid_argument("tuning grid must be strictly increasing");
  }

  const std::size_t third = n / 3;
  const TrajectoryView head = x.first(third);
  TuneResult result{n / 6, {}, holdout_mass_estimate(x), true};
  const double heldout = result.holdout_estimate.value();
  for (std::size_t tau : grid) {
    const double gap = wingit(head, tau).value() - heldout;
    const CriterionValue cv{tau, gap * gap, cfg.c_tune * static_cast<double>(tau) / static_cast<double>(third)};
    result.criterion_values.push_back(cv);
    if (cv.lhs <= cv.rhs) {
      result.tau_hat = tau;
      result.fell_back = false;
      break;
    }
  }
  return result;
}

}  // namespace wingit
