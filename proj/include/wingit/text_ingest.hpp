#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wingit/markov.hpp"

namespace wingit {

/// Merge rule: consecutive tokens `phrase` become the single `replacement`.
struct CollocationRule {
  std::vector<std::string> phrase;
  std::string replacement;
};

/// Bijection between token strings and dense symbol ids (first-appearance order).
class SymbolTable {
 public:
  Symbol intern(std::string_view token);
  [[nodiscard]] const std::string& token(Symbol id) const { return tokens_.at(id); }
  [[nodiscard]] std::size_t size() const noexcept { return tokens_.size(); }
  [[nodiscard]] bool contains(std::string_view token) const;
  [[nodiscard]] Symbol id(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Symbol> ids_;
};

/// A tokenized text together with its unigram (empirical stationary) law.
class Corpus {
 public:
  Corpus(SymbolTable table, std::vector<Symbol> tokens);

  [[nodiscard]] const SymbolTable& symbol_table() const noexcept { return table_; }
  [[nodiscard]] const std::vector<Symbol>& tokens() const noexcept { return tokens_; }
  [[nodiscard]] std::size_t length() const noexcept { return tokens_.size(); }
  [[nodiscard]] std::size_t vocabulary_size() const noexcept { return table_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  /// empirical_pi[x] = count[x] / N.
  [[nodiscard]] const Distribution& empirical_pi() const noexcept { return pi_; }

 private:
  SymbolTable table_;
  std::vector<Symbol> tokens_;
  std::vector<std::size_t> counts_;
  Distribution pi_;
};

/// Lowercase, drop punctuation and split on whitespace.
///
/// Apostrophes and single hyphens are deleted in place ("don't" -> "dont",
/// "sea-side" -> "seaside"). Every other punctuation code point, including
/// dash runs such as "--" and em dashes, separates words. Input is UTF-8;
/// invalid bytes are treated as separators.
[[nodiscard]] std::vector<std::string> clean_tokens(std::string_view text);

/// Applies each rule in order, scanning left to right and replacing
/// non-overlapping matches.
void apply_collocations(std::vector<std::string>& tokens, const std::vector<CollocationRule>& rules);

/// clean_tokens + apply_collocations + interning. Throws std::invalid_argument
/// if nothing survives cleaning.
[[nodiscard]] Corpus tokenize(std::string_view text, const std::vector<CollocationRule>& rules = {});

/// Parses `a b c => merged` lines; blank lines and lines starting with '#'
/// are skipped. Phrase tokens are cleaned the same way as corpus text.
[[nodiscard]] std::vector<CollocationRule> parse_collocations(std::string_view config);

/// Stride between window starts: floor(n/15), at least 1.
[[nodiscard]] std::size_t window_stride(std::size_t n) noexcept;

/// Start offsets 0, stride, 2*stride, ... with start + n <= N.
[[nodiscard]] std::vector<std::size_t> window_starts(std::size_t corpus_length, std::size_t n);

/// Length-n windows of the token stream. Throws std::invalid_argument if n > N or n == 0.
[[nodiscard]] std::vector<Trajectory> extract_trajectories(const Corpus& corpus, std::size_t n);

}  // namespace wingit
