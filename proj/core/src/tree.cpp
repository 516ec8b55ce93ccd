#include "entrotree/tree.hpp"

#include <algorithm>

namespace entrotree {

DecisionNode DecisionNode::leaf(ClassDistribution dist) {
  DecisionNode n;
  n.distribution = std::move(dist);
  return n;
}

bool DecisionNode::operator==(const DecisionNode& other) const {
  const bool same_hierarchy =
      (hierarchy == nullptr) == (other.hierarchy == nullptr) && level == other.level;
  return names_equal(attribute, other.attribute) && kind == other.kind &&
         threshold == other.threshold && distribution == other.distribution &&
         same_hierarchy && branches == other.branches;
}

bool Branch::operator==(const Branch& other) const {
  if (values.size() != other.values.size() || side != other.side) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (value_key(values[i]) != value_key(other.values[i])) return false;
  }
  return child == other.child;
}

bool Branch::matches(const DecisionNode& parent, const Dataset& d, std::size_t row) const {
  auto attr = d.find_attribute(parent.attribute);
  if (!attr) return false;
  if (parent.kind == AttributeKind::numeric) {
    if (d.attribute(*attr).kind != AttributeKind::numeric) return false;
    double v = d.number(row, *attr);
    return side == Side::at_most ? v <= parent.threshold : v > parent.threshold;
  }
  if (d.attribute(*attr).kind != AttributeKind::nominal) return false;
  std::string value = d.label(row, *attr);
  if (parent.hierarchy) {
    if (!parent.hierarchy->contains(value)) return false;
    value = parent.hierarchy->ascend_to_level(value, parent.level);
  }
  auto key = value_key(value);
  return std::any_of(values.begin(), values.end(),
                     [&](const std::string& v) { return value_key(v) == key; });
}

std::size_t route(const DecisionNode& node, const Dataset& d, std::size_t row) {
  for (std::size_t i = 0; i < node.branches.size(); ++i) {
    if (node.branches[i].matches(node, d, row)) return i;
  }
  return static_cast<std::size_t>(-1);
}

const ClassDistribution& classify(const DecisionNode& root, const Dataset& d, std::size_t row) {
  const DecisionNode* n = &root;
  while (!n->is_leaf()) {
    auto b = route(*n, d, row);
    if (b == static_cast<std::size_t>(-1)) break;
    n = &n->branches[b].child;
  }
  return n->distribution;
}

std::size_t height(const DecisionNode& node) {
  std::size_t h = 0;
  for (const auto& b : node.branches) h = std::max(h, height(b.child) + 1);
  return h;
}

std::size_t leaf_count(const DecisionNode& node) {
  if (node.is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& b : node.branches) n += leaf_count(b.child);
  return n;
}

std::size_t internal_count(const DecisionNode& node) {
  if (node.is_leaf()) return 0;
  std::size_t n = 1;
  for (const auto& b : node.branches) n += internal_count(b.child);
  return n;
}

const DecisionNode& node_at(const DecisionNode& root, const std::vector<std::size_t>& path) {
  const DecisionNode* n = &root;
  for (auto i : path) {
    if (i >= n->branches.size()) throw Error("tree path does not exist");
    n = &n->branches[i].child;
  }
  return *n;
}

DecisionNode& node_at(DecisionNode& root, const std::vector<std::size_t>& path) {
  return const_cast<DecisionNode&>(node_at(static_cast<const DecisionNode&>(root), path));
}

std::vector<std::size_t> rows_at(const DecisionNode& root, const std::vector<std::size_t>& path,
                                 const Dataset& d) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < d.size(); ++r) {
    const DecisionNode* n = &root;
    bool reached = true;
    for (auto i : path) {
      if (i >= n->branches.size() || !n->branches[i].matches(*n, d, r)) {
        reached = false;
        break;
      }
      n = &n->branches[i].child;
    }
    if (reached) rows.push_back(r);
  }
  return rows;
}

}  // namespace entrotree
