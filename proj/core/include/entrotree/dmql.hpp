#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "entrotree/concept_hierarchy.hpp"
#include "entrotree/dataset.hpp"
#include "entrotree/induction.hpp"
#include "entrotree/entropy.hpp"
#include "entrotree/rules.hpp"
#include "entrotree/tree.hpp"

namespace entrotree::dmql {

struct SourcePosition {
  std::size_t line = 1;
  std::size_t column = 1;
  bool operator==(const SourcePosition&) const = default;
  auto operator<=>(const SourcePosition&) const = default;
};

// Syntax and semantic errors carry the offending position.
class ParseError : public Error {
 public:
  ParseError(SourcePosition pos, const std::string& message,
             std::vector<std::string> expected = {});

  const SourcePosition& position() const { return pos_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourcePosition pos_;
  std::vector<std::string> expected_;
};

enum class TokenKind { keyword, identifier, string, number, punct, end };

struct Token {
  TokenKind kind = TokenKind::end;
  // Keywords are lowercased; strings hold their unquoted contents.
  std::string lexeme;
  SourcePosition position;
};

// Keywords match case-insensitively; "priority2" lexes as keyword + number.
// "//" starts a comment running to end of line. The stream ends with an
// `end` token.
std::vector<Token> tokenize(std::string_view text);

const std::set<std::string>& keywords();

enum class Task { generalize, classify_tree };

struct ReplaceClause {
  std::string to_level;
  std::vector<std::string> target_values;
  std::string new_attribute;
  bool operator==(const ReplaceClause&) const = default;
};

struct PriorityClause {
  std::size_t rank = 1;
  std::string attribute;
  std::vector<std::string> value_order;
  bool operator==(const PriorityClause&) const = default;
};

struct Binding {
  std::string name;
  std::vector<std::string> values;
  bool operator==(const Binding&) const = default;
};

struct DmqlQuery {
  Task task = Task::classify_tree;
  // Identifier after `classify` (e.g. Region_Data, Decision_Tree).
  std::string target;
  std::string source_dataset;
  std::optional<ReplaceClause> replace;
  std::vector<PriorityClause> priorities;  // sorted by rank
  std::vector<std::string> relevance;      // first entry is the class attribute
  std::optional<std::string> count_attribute;  // "new_attribute count" after relevance
  std::optional<std::string> leaf_count_attr;
  std::vector<Binding> bindings;

  bool operator==(const DmqlQuery&) const = default;
};

DmqlQuery parse(std::string_view text);

// Canonical query text; parse(pretty_print(q)) == q.
std::string pretty_print(const DmqlQuery& q);

struct CatalogEntry {
  Dataset data;
  std::vector<ConceptHierarchy> hierarchies;
};

using Catalog = std::map<std::string, CatalogEntry>;

struct ExecuteOptions {
  InductionConfig induction;  // epsilon, kappa, min_objects
  bool merge = true;
  bool balance = true;
  std::optional<std::size_t> checkpoint;  // default: number of priorities
  std::optional<RelevancePolicy> relevance;
};

struct QueryResult {
  Task task = Task::classify_tree;
  // generalize
  std::optional<Dataset> generalized;
  std::string count_column = "count";
  // classify_tree
  std::optional<DecisionNode> tree;
  std::optional<DecisionNode> baseline;
  std::vector<ClassificationRule> rules;
  std::optional<ComparisonReport> report;
  std::optional<std::string> leaf_count_attr;

  std::vector<std::string> warnings;
  std::vector<std::string> log;
};

const CatalogEntry& lookup(const Catalog& catalog, std::string_view name);

QueryResult execute(const DmqlQuery& q, const Catalog& catalog,
                    const ExecuteOptions& options = {});

}  // namespace entrotree::dmql
