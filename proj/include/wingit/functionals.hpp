#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "wingit/markov.hpp"

namespace wingit {

/// Closed 1-based index range [first, last] into a trajectory.
struct IndexRange {
  std::size_t first;
  std::size_t last;
};

/// Per-symbol ascending list of 1-based positions in a trajectory.
///
/// Stored compactly: symbols get a slot in first-appearance order and all
/// position lists share one buffer (CSR layout).
class OccurrenceIndex {
 public:
  explicit OccurrenceIndex(TrajectoryView x);

  [[nodiscard]] std::size_t length() const noexcept { return positions_.size(); }
  [[nodiscard]] std::size_t distinct() const noexcept { return symbols_.size(); }

  /// Distinct symbols in first-appearance order.
  [[nodiscard]] std::span<const Symbol> symbols() const noexcept { return symbols_; }

  /// Ascending positions of `s`; empty for a symbol that never occurs.
  [[nodiscard]] std::span<const std::size_t> positions(Symbol s) const;

  [[nodiscard]] std::size_t count(Symbol s) const { return positions(s).size(); }

  /// Occurrences of `s` with position in [lo, hi] (1-based, inclusive).
  /// Binary search; an empty or inverted range yields 0.
  [[nodiscard]] std::size_t count_between(Symbol s, std::size_t lo, std::size_t hi) const;

 private:
  std::unordered_map<Symbol, std::size_t> slot_;
  std::vector<Symbol> symbols_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> positions_;
};

/// N_x over the whole trajectory, or over `window` when given.
[[nodiscard]] std::size_t count_occurrences(const OccurrenceIndex& index, Symbol x,
                                            std::optional<IndexRange> window = std::nullopt);

/// Stationary mass of the symbols absent from x.
[[nodiscard]] double missing_mass(const Distribution& pi, TrajectoryView x);

/// Stationary mass of the symbols occurring at most zeta times in x.
[[nodiscard]] double small_count_mass(const Distribution& pi, TrajectoryView x, std::size_t zeta);

/// Stationary mass of the symbols occurring exactly zeta times in x.
[[nodiscard]] double exact_count_mass(const Distribution& pi, TrajectoryView x, std::size_t zeta);

}  // namespace wingit
