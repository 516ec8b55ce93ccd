#include <algorithm>
#include <cctype>

#include "entrotree/dmql.hpp"

namespace entrotree::dmql {

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::end:
      return "end of input";
    case TokenKind::string:
      return "string \"" + t.lexeme + "\"";
    case TokenKind::number:
      return "number " + t.lexeme;
    default:
      return "'" + t.lexeme + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  DmqlQuery parse_query() {
    DmqlQuery q;
    expect_keyword("classify");
    q.target = expect_name("query target");

    std::optional<SourcePosition> from_at, till_at, relevance_at, leaf_at;
    std::vector<std::pair<PriorityClause, SourcePosition>> priorities;

    while (peek().kind != TokenKind::end) {
      const Token& t = peek();
      if (is_keyword(t, "till")) {
        once(till_at, "till");
        q.replace = parse_till();
      } else if (is_keyword(t, "according")) {
        auto at = t.position;
        priorities.emplace_back(parse_priority(), at);
      } else if (is_keyword(t, "in")) {
        once(relevance_at, "in relevance to");
        parse_relevance(q);
      } else if (is_keyword(t, "with") ||
                 (is_keyword(t, "where") && is_keyword(peek(1), "attribute"))) {
        once(leaf_at, "attribute values for ... count");
        q.leaf_count_attr = parse_leaf_count();
      } else if (is_keyword(t, "where")) {
        parse_where(q);
      } else if (is_keyword(t, "from")) {
        once(from_at, "from");
        advance();
        q.source_dataset = expect_name("dataset name");
      } else {
        throw ParseError(t.position, "expected a clause, found " + describe(t),
                         {"till", "according", "in", "where", "with", "from", "end of input"});
      }
    }

    if (!from_at) throw ParseError(peek().position, "missing 'from' clause", {"from"});
    q.task = q.replace ? Task::generalize : Task::classify_tree;
    if (q.relevance.empty() && q.task == Task::classify_tree) {
      throw ParseError(peek().position, "classification needs an 'in relevance to' clause",
                       {"in"});
    }

    std::stable_sort(priorities.begin(), priorities.end(),
                     [](const auto& a, const auto& b) { return a.first.rank < b.first.rank; });
    for (std::size_t i = 0; i < priorities.size(); ++i) {
      const auto& [clause, at] = priorities[i];
      if (i > 0 && priorities[i - 1].first.rank == clause.rank) {
        throw ParseError(at, "duplicate priority rank " + std::to_string(clause.rank));
      }
      if (clause.rank != i + 1) {
        throw ParseError(at, "priority ranks must be contiguous from 1; found rank " +
                                 std::to_string(clause.rank));
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (names_equal(priorities[j].first.attribute, clause.attribute)) {
          throw ParseError(at, "attribute '" + clause.attribute + "' has two priorities");
        }
      }
      q.priorities.push_back(clause);
    }
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  static bool is_keyword(const Token& t, std::string_view word) {
    return t.kind == TokenKind::keyword && t.lexeme == word;
  }
  static bool is_punct(const Token& t, char c) {
    return t.kind == TokenKind::punct && t.lexeme.size() == 1 && t.lexeme[0] == c;
  }

  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    throw ParseError(peek().position, "expected " + what + ", found " + describe(peek()),
                     std::move(expected));
  }

  void expect_keyword(std::string_view word) {
    if (!is_keyword(peek(), word)) fail("'" + std::string(word) + "'", {std::string(word)});
    advance();
  }

  void expect_punct(char c) {
    if (!is_punct(peek(), c)) fail(std::string("'") + c + "'", {std::string(1, c)});
    advance();
  }

  std::string expect_name(const std::string& what) {
    const Token& t = peek();
    if (t.kind != TokenKind::identifier && t.kind != TokenKind::string) {
      fail(what, {"identifier", "string"});
    }
    return advance().lexeme;
  }

  void once(std::optional<SourcePosition>& seen, const std::string& clause) {
    if (seen) throw ParseError(peek().position, "duplicate '" + clause + "' clause");
    seen = peek().position;
  }

  // ident | string, separated by commas.
  std::vector<std::string> name_list(const std::string& what) {
    std::vector<std::string> out{expect_name(what)};
    while (is_punct(peek(), ',')) {
      advance();
      out.push_back(expect_name(what));
    }
    return out;
  }

  void attribute_values_marker() {
    if (is_keyword(peek(), "attribute_values")) {
      advance();
      return;
    }
    if (is_keyword(peek(), "attribute") && is_keyword(peek(1), "values")) {
      advance();
      advance();
      return;
    }
    fail("'attribute_values' or 'attribute values'", {"attribute_values", "attribute"});
  }

  ReplaceClause parse_till() {
    ReplaceClause r;
    expect_keyword("till");
    r.to_level = expect_name("target level");
    expect_keyword("replace");
    expect_punct('{');
    r.target_values = name_list("value");
    expect_punct('}');
    attribute_values_marker();
    expect_keyword("with");
    expect_keyword("new_attribute");
    r.new_attribute = expect_name("new attribute name");
    return r;
  }

  PriorityClause parse_priority() {
    PriorityClause p;
    expect_keyword("according");
    expect_keyword("to");
    expect_keyword("priority");
    if (peek().kind == TokenKind::number) {
      const Token& num = advance();
      if (num.lexeme.size() > 6) throw ParseError(num.position, "priority rank too large");
      p.rank = std::stoul(num.lexeme);
      if (p.rank == 0) throw ParseError(num.position, "priority ranks start at 1");
    }
    expect_punct('{');
    p.attribute = expect_name("priority attribute");
    expect_punct('(');
    p.value_order = name_list("attribute value");
    expect_punct(')');
    attribute_values_marker();
    expect_punct('}');
    return p;
  }

  void parse_relevance(DmqlQuery& q) {
    expect_keyword("in");
    expect_keyword("relevance");
    expect_keyword("to");
    q.relevance = name_list("attribute");
    if (is_keyword(peek(), "new_attribute")) {
      advance();
      const Token& t = peek();
      if (t.kind == TokenKind::end || t.kind == TokenKind::punct || t.kind == TokenKind::number) {
        fail("count column name", {"identifier"});
      }
      q.count_attribute = advance().lexeme;
    }
  }

  std::string parse_leaf_count() {
    advance();  // where | with
    expect_keyword("attribute");
    expect_keyword("values");
    expect_keyword("for");
    auto attr = expect_name("attribute");
    expect_keyword("count");
    return attr;
  }

  void parse_where(DmqlQuery& q) {
    expect_keyword("where");
    q.bindings.push_back(parse_binding());
    while (is_keyword(peek(), "and")) {
      advance();
      q.bindings.push_back(parse_binding());
    }
  }

  Binding parse_binding() {
    Binding b;
    b.name = expect_name("binding name");
    expect_punct('=');
    expect_punct('{');
    b.values = name_list("value");
    expect_punct('}');
    return b;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

bool plain_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  }
  std::string low = s;
  for (auto& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (keywords().count(low)) return false;
  // Would re-lex as priority + number.
  return !(low.size() > 8 && low.compare(0, 8, "priority") == 0 &&
           low.find_first_not_of("0123456789", 8) == std::string::npos);
}

std::string name(const std::string& s) {
  return plain_identifier(s) ? s : "\"" + s + "\"";
}

std::string quoted_list(const std::vector<std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + values[i] + "\"";
  }
  return out;
}

}  // namespace

DmqlQuery parse(std::string_view text) {
  Parser p(tokenize(text));
  return p.parse_query();
}

std::string pretty_print(const DmqlQuery& q) {
  std::string out = "classify " + name(q.target) + "\n";
  if (q.replace) {
    out += "till " + name(q.replace->to_level) + " replace {" +
           quoted_list(q.replace->target_values) + "} attribute_values with new_attribute " +
           name(q.replace->new_attribute) + "\n";
  }
  for (const auto& p : q.priorities) {
    out += "according to priority" + std::to_string(p.rank) + " {" + name(p.attribute) + "(" +
           quoted_list(p.value_order) + ") attribute_values}\n";
  }
  if (!q.relevance.empty()) {
    out += "in relevance to ";
    for (std::size_t i = 0; i < q.relevance.size(); ++i) {
      out += (i ? ", " : "") + name(q.relevance[i]);
    }
    // Keywords are accepted verbatim here, so print the bare lexeme.
    if (q.count_attribute) {
      const auto& c = *q.count_attribute;
      out += " new_attribute " + (keywords().count(c) ? c : name(c));
    }
    out += "\n";
  }
  if (q.leaf_count_attr) {
    out += "with attribute values for " + name(*q.leaf_count_attr) + " count\n";
  }
  out += "from " + name(q.source_dataset) + "\n";
  for (std::size_t i = 0; i < q.bindings.size(); ++i) {
    out += (i ? "and " : "where ") + name(q.bindings[i].name) + " = {" +
           quoted_list(q.bindings[i].values) + "}\n";
  }
  return out;
}

}  // namespace entrotree::dmql
