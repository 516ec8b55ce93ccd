#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "entrotree/concept_hierarchy.hpp"
#include "entrotree/dataset.hpp"

namespace entrotree {

struct Branch;

// A test node (attribute set, one branch per value set or threshold side) or
// a leaf (no branches). Every node keeps the class distribution of the
// training tuples that reached it; for leaves that is the leaf distribution.
struct DecisionNode {
  std::string attribute;
  AttributeKind kind = AttributeKind::nominal;
  double threshold = 0;
  std::vector<Branch> branches;
  ClassDistribution distribution;
  // Set when branch values are concepts above the primitive level: tuples are
  // mapped through the hierarchy to `level` before matching.
  std::shared_ptr<const ConceptHierarchy> hierarchy;
  std::size_t level = 0;

  bool is_leaf() const;
  static DecisionNode leaf(ClassDistribution dist);

  bool operator==(const DecisionNode& other) const;
};

enum class Side { at_most, greater };

struct Branch {
  // Nominal branches: the value set (display spellings). Numeric: unused.
  std::vector<std::string> values;
  Side side = Side::at_most;
  DecisionNode child;

  bool matches(const DecisionNode& parent, const Dataset& d, std::size_t row) const;
  bool operator==(const Branch& other) const;
};

inline bool DecisionNode::is_leaf() const { return branches.empty(); }

// Index of the branch a tuple follows, or npos when its value has no branch.
std::size_t route(const DecisionNode& node, const Dataset& d, std::size_t row);

// Distribution of the leaf reached by a tuple; on a value with no branch, the
// aggregate distribution of the deepest node reached.
const ClassDistribution& classify(const DecisionNode& root, const Dataset& d, std::size_t row);

// Leaf = height 0.
std::size_t height(const DecisionNode& node);
std::size_t leaf_count(const DecisionNode& node);
std::size_t internal_count(const DecisionNode& node);

// Node addressed by branch indices from the root.
const DecisionNode& node_at(const DecisionNode& root, const std::vector<std::size_t>& path);
DecisionNode& node_at(DecisionNode& root, const std::vector<std::size_t>& path);

// Training rows routed to the node at `path`.
std::vector<std::size_t> rows_at(const DecisionNode& root, const std::vector<std::size_t>& path,
                                 const Dataset& d);

}  // namespace entrotree
