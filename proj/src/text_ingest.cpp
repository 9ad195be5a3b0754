#include "wingit/text_ingest.hpp"

#include <stdexcept>
#include <string>

namespace wingit {

Symbol SymbolTable::intern(std::string_view token) {
  const auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<Symbol>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

bool SymbolTable::contains(std::string_view token) const { return ids_.contains(std::string(token)); }

Symbol SymbolTable::id(std::string_view token) const { return ids_.at(std::string(token)); }

namespace {

Distribution empirical(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) throw std::invalid_argument("corpus is empty");
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return Distribution(std::move(probs));
}

std::vector<std::size_t> tally(const std::vector<Symbol>& tokens, std::size_t vocabulary) {
  std::vector<std::size_t> counts(vocabulary, 0);
  for (Symbol s : tokens) ++counts.at(s);
  return counts;
}

}  // namespace

Corpus::Corpus(SymbolTable table, std::vector<Symbol> tokens)
    : table_(std::move(table)),
      tokens_(std::move(tokens)),
      counts_(tally(tokens_, table_.size())),
      pi_(empirical(counts_, tokens_.size())) {}

namespace {

enum class CharClass { kWord, kSpace, kDeleted, kHyphen, kSeparator };

bool is_space(char32_t c) {
  return c == U' ' || (c >= U'\t' && c <= U'\r') || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
         c == 0x3000;
}

// Code points in the Unicode P* general categories, restricted to the blocks
// that occur in Latin-script prose.
bool is_punctuation(char32_t c) {
  if (c < 0x80) {
    switch (c) {
      case U'!': case U'"': case U'#': case U'%': case U'&': case U'\'': case U'(': case U')':
      case U'*': case U',': case U'-': case U'.': case U'/': case U':': case U';': case U'?':
      case U'@': case U'[': case U'\\': case U']': case U'_': case U'{': case U'}':
        return true;
      default:
        return false;
    }
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x37E: case 0x387:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x2043) || (c >= 0x2045 && c <= 0x2051) ||
         (c >= 0x2053 && c <= 0x205E) || (c >= 0x2E00 && c <= 0x2E4F) || (c >= 0x3001 && c <= 0x3003) ||
         (c >= 0x3008 && c <= 0x3011) || (c >= 0x3014 && c <= 0x301F) || c == 0xFF01 || c == 0xFF0C ||
         c == 0xFF0E || c == 0xFF1A || c == 0xFF1B || c == 0xFF1F;
}

CharClass classify(char32_t c) {
  if (is_space(c)) return CharClass::kSpace;
  if (c == U'\'' || c == 0x2018 || c == 0x2019 || c == 0x02BC || c == 0xFEFF || c == 0xAD) {
    return CharClass::kDeleted;
  }
  if (c == U'-' || c == 0x2010 || c == 0x2011) return CharClass::kHyphen;
  if (is_punctuation(c)) return CharClass::kSeparator;
  return CharClass::kWord;
}

char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0x80) return c;
  if ((c >= 0xC0 && c <= 0xDE && c != 0xD7) || (c >= 0x391 && c <= 0x3AB && c != 0x3A2) ||
      (c >= 0x410 && c <= 0x42F)) {
    return c + 32;
  }
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177)) return c | 1U;
  if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 1) ? c + 1 : c;
  if (c == 0x178) return 0xFF;
  return c;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

// Decodes one code point at text[pos]. Malformed input yields 0xFFFFFFFF
// and advances a single byte.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  constexpr char32_t kInvalid = 0xFFFFFFFF;
  const auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t len = 0;
  char32_t c = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    c = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    c = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    c = lead & 0x07;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + len > text.size()) {
    ++pos;
    return kInvalid;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[pos + k]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    c = (c << 6) | (b & 0x3F);
  }
  pos += len;
  return c;
}

}  // namespace

std::vector<std::string> clean_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };

  std::size_t pos = 0;
  std::size_t pending_hyphens = 0;
  while (pos < text.size()) {
    const char32_t c = decode_utf8(text, pos);
    const CharClass cls = c == 0xFFFFFFFF ? CharClass::kSpace : classify(c);
    if (cls == CharClass::kHyphen) {
      ++pending_hyphens;
      continue;
    }
    // A lone hyphen is deleted; a run of two or more acts as a dash.
    if (pending_hyphens >= 2) flush();
    pending_hyphens = 0;
    switch (cls) {
      case CharClass::kWord:
        append_utf8(current, to_lower(c));
        break;
      case CharClass::kDeleted:
        break;
      default:
        flush();
        break;
    }
  }
  if (pending_hyphens >= 2) flush();
  flush();
  return tokens;
}

void apply_collocations(std::vector<std::string>& tokens, const std::vector<CollocationRule>& rules) {
  for (const auto& rule : rules) {
    const std::size_t len = rule.phrase.size();
    if (len == 0) continue;
    std::vector<std::string> merged;
    merged.reserve(tokens.size());
    std::size_t i = 0;
    while (i < tokens.size()) {
      bool match = i + len <= tokens.size();
      for (std::size_t k = 0; match && k < len; ++k) match = tokens[i + k] == rule.phrase[k];
      if (match) {
        merged.push_back(rule.replacement);
        i += len;
      } else {
        merged.push_back(std::move(tokens[i]));
        ++i;
      }
    }
    tokens = std::move(merged);
  }
}

Corpus tokenize(std::string_view text, const std::vector<CollocationRule>& rules) {
  std::vector<std::string> words = clean_tokens(text);
  if (words.empty()) throw std::invalid_argument("text is empty after removing punctuation");
  apply_collocations(words, rules);
  SymbolTable table;
  std::vector<Symbol> ids;
  ids.reserve(words.size());
  for (const auto& w : words) ids.push_back(table.intern(w));
  return Corpus(std::move(table), std::move(ids));
}

std::vector<CollocationRule> parse_collocations(std::string_view config) {
  std::vector<CollocationRule> rules;
  std::size_t line_no = 0;
  while (!config.empty()) {
    const auto eol = config.find('\n');
    std::string_view line = config.substr(0, eol);
    config = eol == std::string_view::npos ? std::string_view{} : config.substr(eol + 1);
    ++line_no;

    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto arrow = line.find("=>");
    if (arrow == std::string_view::npos) {
      throw std::invalid_argument("collocation line " + std::to_string(line_no) + ": missing '=>'");
    }
    CollocationRule rule;
    rule.phrase = clean_tokens(line.substr(0, arrow));
    std::string_view rhs = line.substr(arrow + 2);
    const auto b = rhs.find_first_not_of(" \t\r");
    const auto e = rhs.find_last_not_of(" \t\r");
    if (b != std::string_view::npos) rhs = rhs.substr(b, e - b + 1);
    else rhs = {};
    if (rule.phrase.size() < 2) {
      throw std::invalid_argument("collocation line " + std::to_string(line_no) + ": phrase needs at least 2 tokens");
    }
    if (rhs.empty() || rhs.find_first_of(" \t") != std::string_view::npos) {
      throw std::invalid_argument("collocation line " + std::to_string(line_no) + ": replacement must be one token");
    }
    for (char ch : rhs) rule.replacement.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch + 32) : ch);
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::size_t window_stride(std::size_t n) noexcept { return n / 15 == 0 ? 1 : n / 15; }

std::vector<std::size_t> window_starts(std::size_t corpus_length, std::size_t n) {
  if (n == 0) throw std::invalid_argument("window length n must be >= 1");
  if (n > corpus_length) {
    throw std::invalid_argument("window length n = " + std::to_string(n) + " exceeds corpus length N = " +
                                std::to_string(corpus_length));
  }
  const std::size_t stride = window_stride(n);
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + n <= corpus_length; s += stride) starts.push_back(s);
  return starts;
}

std::vector<Trajectory> extract_trajectories(const Corpus& corpus, std::size_t n) {
  const auto& tokens = corpus.tokens();
  std::vector<Trajectory> out;
  for (std::size_t s : window_starts(tokens.size(), n)) {
    const auto first = tokens.begin() + static_cast<std::ptrdiff_t>(s);
    out.emplace_back(std::vector<Symbol>(first, first + static_cast<std::ptrdiff_t>(n)));
  }
  return out;
}

}  // namespace wingit
