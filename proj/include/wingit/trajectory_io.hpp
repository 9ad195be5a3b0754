#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "wingit/markov.hpp"
#include "wingit/text_ingest.hpp"

namespace wingit {

// Trajectory files are UTF-8 text with one token per line. Blank lines are
// ignored and surrounding whitespace is trimmed. With `numeric` set each
// token must be a decimal symbol id; otherwise tokens are interned in
// first-appearance order.

struct LoadedTrajectory {
  Trajectory trajectory;
  SymbolTable table;  ///< empty when loaded as numeric
};

[[nodiscard]] LoadedTrajectory read_trajectory(std::istream& in, bool numeric);
[[nodiscard]] LoadedTrajectory read_trajectory_file(const std::filesystem::path& path, bool numeric);

void write_trajectory(std::ostream& out, TrajectoryView x);
void write_trajectory(std::ostream& out, TrajectoryView x, const SymbolTable& table);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

/// printf("%.10g"): ten significant digits, ties to even on exact decimal ties.
[[nodiscard]] std::string format_number(double v);

}  // namespace wingit
