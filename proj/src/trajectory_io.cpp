#include "wingit/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wingit {

LoadedTrajectory read_trajectory(std::istream& in, bool numeric) {
  SymbolTable table;
  std::vector<Symbol> symbols;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + b, e - b + 1);
    if (numeric) {
      Symbol id = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": not a symbol id: '" + std::string(token) + "'");
      }
      symbols.push_back(id);
    } else {
      symbols.push_back(table.intern(token));
    }
  }
  if (symbols.empty()) throw std::runtime_error("trajectory file contains no tokens");
  return LoadedTrajectory{Trajectory(std::move(symbols)), std::move(table)};
}

LoadedTrajectory read_trajectory_file(const std::filesystem::path& path, bool numeric) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trajectory(in, numeric);
}

void write_trajectory(std::ostream& out, TrajectoryView x) {
  for (Symbol s : x) out << s << '\n';
}

void write_trajectory(std::ostream& out, TrajectoryView x, const SymbolTable& table) {
  for (Symbol s : x) out << table.token(s) << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace wingit
