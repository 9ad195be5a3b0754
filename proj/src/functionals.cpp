#include "wingit/functionals.hpp"

#include <algorithm>
#include <stdexcept>

#include "wingit/summation.hpp"

namespace wingit {

OccurrenceIndex::OccurrenceIndex(TrajectoryView x) {
  std::vector<std::size_t> counts;
  std::vector<std::size_t> slot_of_position(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto [it, inserted] = slot_.try_emplace(x[i], symbols_.size());
    if (inserted) {
      symbols_.push_back(x[i]);
      counts.push_back(0);
    }
    ++counts[it->second];
    slot_of_position[i] = it->second;
  }
  offsets_.assign(symbols_.size() + 1, 0);
  for (std::size_t s = 0; s < counts.size(); ++s) offsets_[s + 1] = offsets_[s] + counts[s];
  positions_.resize(x.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) positions_[cursor[slot_of_position[i]]++] = i + 1;
}

std::span<const std::size_t> OccurrenceIndex::positions(Symbol s) const {
  const auto it = slot_.find(s);
  if (it == slot_.end()) return {};
  const std::size_t slot = it->second;
  return std::span<const std::size_t>(positions_).subspan(offsets_[slot], offsets_[slot + 1] - offsets_[slot]);
}

std::size_t OccurrenceIndex::count_between(Symbol s, std::size_t lo, std::size_t hi) const {
  if (lo > hi) return 0;
  const auto pos = positions(s);
  const auto first = std::lower_bound(pos.begin(), pos.end(), lo);
  const auto last = std::upper_bound(first, pos.end(), hi);
  return static_cast<std::size_t>(last - first);
}

std::size_t count_occurrences(const OccurrenceIndex& index, Symbol x, std::optional<IndexRange> window) {
  if (!window) return index.count(x);
  if (window->first < 1 || window->last > index.length() || window->first > window->last) {
    throw std::invalid_argument("window is not a subrange of [1, n]");
  }
  return index.count_between(x, window->first, window->last);
}

namespace {

void check_alphabet(const Distribution& pi, const OccurrenceIndex& index) {
  for (Symbol s : index.symbols()) {
    if (s >= pi.size()) throw std::invalid_argument("trajectory symbol outside the distribution's alphabet");
  }
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double missing_mass(const Distribution& pi, TrajectoryView x) {
  const OccurrenceIndex index(x);
  check_alphabet(pi, index);
  CompensatedSum seen;
  for (Symbol s : index.symbols()) seen.add(pi[s]);
  return clamp_unit(1.0 - seen.value());
}

double small_count_mass(const Distribution& pi, TrajectoryView x, std::size_t zeta) {
  const OccurrenceIndex index(x);
  check_alphabet(pi, index);
  CompensatedSum seen;
  CompensatedSum seen_rare;
  for (Symbol s : index.symbols()) {
    seen.add(pi[s]);
    if (index.count(s) <= zeta) seen_rare.add(pi[s]);
  }
  return clamp_unit(seen_rare.value() + (1.0 - seen.value()));
}

double exact_count_mass(const Distribution& pi, TrajectoryView x, std::size_t zeta) {
  if (zeta == 0) return missing_mass(pi, x);
  const OccurrenceIndex index(x);
  check_alphabet(pi, index);
  CompensatedSum mass;
  for (Symbol s : index.symbols()) {
    if (index.count(s) == zeta) mass.add(pi[s]);
  }
  return clamp_unit(mass.value());
}

}  // namespace wingit
