#include <cctype>

#include "entrotree/dmql.hpp"

namespace entrotree::dmql {

namespace {

std::string format_position(SourcePosition pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

ParseError::ParseError(SourcePosition pos, const std::string& message,
                       std::vector<std::string> expected)
    : Error(format_position(pos) + ": " + message), pos_(pos), expected_(std::move(expected)) {}

const std::set<std::string>& keywords() {
  static const std::set<std::string> words = {
      "classify", "till",     "replace", "attribute_values", "attribute", "values",
      "with",     "new_attribute", "according", "to",       "priority",  "in",
      "relevance", "where",   "for",     "count",            "from",      "and"};
  return words;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  SourcePosition pos;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const SourcePosition start = pos;
    if (c == '"') {
      std::string value;
      advance(1);
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\n') break;
        value.push_back(text[i]);
        advance(1);
      }
      if (i >= text.size() || text[i] != '"') {
        throw ParseError(start, "unterminated string");
      }
      advance(1);
      tokens.push_back({TokenKind::string, std::move(value), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tokens.push_back({TokenKind::number, std::string(text.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      auto low = lower(word);
      // "priority2" -> priority, 2
      if (low.size() > 8 && low.compare(0, 8, "priority") == 0 &&
          low.find_first_not_of("0123456789", 8) == std::string::npos) {
        tokens.push_back({TokenKind::keyword, "priority", start});
        SourcePosition num = start;
        num.column += 8;
        tokens.push_back({TokenKind::number, word.substr(8), num});
      } else if (keywords().count(low)) {
        tokens.push_back({TokenKind::keyword, low, start});
      } else {
        tokens.push_back({TokenKind::identifier, word, start});
      }
      advance(j - i);
      continue;
    }
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',' || c == '=') {
      tokens.push_back({TokenKind::punct, std::string(1, c), start});
      advance(1);
      continue;
    }
    throw ParseError(start, std::string("illegal character '") + c + "'");
  }
  tokens.push_back({TokenKind::end, "", pos});
  return tokens;
}

}  // namespace entrotree::dmql
