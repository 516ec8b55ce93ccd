#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entrotree/dataset.hpp"
#include "entrotree/tree.hpp"

namespace entrotree {

struct Condition {
  enum class Op { in, at_most, greater };
  std::string attribute;
  Op op = Op::in;
  std::vector<std::string> values;  // Op::in
  double threshold = 0;             // Op::at_most / Op::greater

  // "a=v", "a in {x,y}", "a<=t" or "a>t".
  std::string to_string() const;
  bool operator==(const Condition&) const = default;
};

struct ClassificationRule {
  std::vector<Condition> conditions;  // path order
  std::string conclusion;
  std::uint64_t support = 0;
  double confidence = 0;
  ClassDistribution distribution;

  // IF a=v AND b in {x,y} THEN c [support, confidence]
  std::string to_string() const;
  // Order-insensitive identity of the condition set plus conclusion.
  std::string canonical() const;
};

// One rule per leaf, in depth-first branch order.
std::vector<ClassificationRule> extract_rules(const DecisionNode& root);

void write_rules(std::ostream& out, const std::vector<ClassificationRule>& rules);

struct TreeMetrics {
  std::size_t height = 0;
  std::size_t internal_nodes = 0;
  std::size_t leaves = 0;
  std::size_t rules = 0;
  std::vector<std::string> attributes_used;  // first-visit order
};

TreeMetrics tree_metrics(const DecisionNode& root);

struct AttributeCoverage {
  std::string attribute;
  bool covered_a = false;
  bool covered_b = false;
};

struct ComparisonReport {
  TreeMetrics a;
  TreeMetrics b;
  std::vector<std::string> only_in_a;  // rule text
  std::vector<std::string> only_in_b;
  std::vector<AttributeCoverage> requested;
};

// An attribute is covered by a tree iff some internal node tests it.
ComparisonReport compare_trees(const DecisionNode& a, const DecisionNode& b,
                               const std::vector<std::string>& requested);

void write_report(std::ostream& out, const ComparisonReport& report,
                  const std::string& name_a = "baseline",
                  const std::string& name_b = "priority");

}  // namespace entrotree
