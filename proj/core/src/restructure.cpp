#include "entrotree/restructure.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace entrotree {

namespace {

std::string branch_text(const DecisionNode& parent, const Branch& b) {
  if (parent.kind == AttributeKind::numeric) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%g", b.side == Side::at_most ? "<=" : ">",
                  parent.threshold);
    return buf;
  }
  std::string out;
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    if (i) out += ",";
    out += b.values[i];
  }
  return out;
}

std::string child_prefix(const std::string& label, const DecisionNode& parent, const Branch& b) {
  return label + "=" + branch_text(parent, b) + ">";
}

std::set<std::string> value_keys(const std::vector<std::string>& values) {
  std::set<std::string> keys;
  for (const auto& v : values) keys.insert(value_key(v));
  return keys;
}

bool equivalent(const DecisionNode& a, const DecisionNode& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.distribution.majority_index() == b.distribution.majority_index();
  if (!names_equal(a.attribute, b.attribute) || a.kind != b.kind ||
      a.threshold != b.threshold || a.level != b.level ||
      a.branches.size() != b.branches.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    const auto& x = a.branches[i];
    const auto& y = b.branches[i];
    if (x.side != y.side || value_keys(x.values) != value_keys(y.values)) return false;
    if (!equivalent(x.child, y.child)) return false;
  }
  return true;
}

void collect_attributes(const DecisionNode& n, std::vector<std::string>& out) {
  if (n.is_leaf()) return;
  out.push_back(n.attribute);
  for (const auto& b : n.branches) collect_attributes(b.child, out);
}

bool touches_protected(const DecisionNode& parent, const DecisionNode& child,
                       const PriorityAssignment& pa) {
  if (pa.protects(parent.attribute)) return true;
  std::vector<std::string> attrs;
  collect_attributes(child, attrs);
  return std::any_of(attrs.begin(), attrs.end(),
                     [&](const auto& a) { return pa.protects(a); });
}

// Equivalent subtrees have the same shape, so fusing is positional.
void fuse(DecisionNode& into, const DecisionNode& from) {
  into.distribution += from.distribution;
  for (std::size_t i = 0; i < into.branches.size(); ++i) {
    fuse(into.branches[i].child, from.branches[i].child);
  }
}

std::string value_set(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::string out = "{";
  bool first = true;
  for (const auto* vs : {&a, &b}) {
    for (const auto& v : *vs) {
      if (!first) out += ",";
      out += v;
      first = false;
    }
  }
  return out + "}";
}

void merge_node(DecisionNode& node, const std::string& prefix, const PriorityAssignment& pa,
                std::vector<std::string>* log) {
  if (node.is_leaf()) return;
  const std::string label = prefix + node.attribute;
  for (auto& b : node.branches) merge_node(b.child, child_prefix(label, node, b), pa, log);
  // Value-set unions only make sense for nominal tests.
  if (node.kind != AttributeKind::nominal) return;

  std::set<std::pair<std::string, std::string>> refused;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < node.branches.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < node.branches.size(); ++j) {
        auto& bi = node.branches[i];
        auto& bj = node.branches[j];
        if (!equivalent(bi.child, bj.child)) continue;
        if (touches_protected(node, bi.child, pa) || touches_protected(node, bj.child, pa)) {
          auto key = std::make_pair(branch_text(node, bi), branch_text(node, bj));
          if (log && refused.insert(key).second) {
            log->push_back("refused " + label + "/" + value_set(bi.values, bj.values) +
                           ": priority");
          }
          continue;
        }
        if (log) log->push_back("merged " + label + "/" + value_set(bi.values, bj.values));
        fuse(bi.child, bj.child);
        bi.values.insert(bi.values.end(), bj.values.begin(), bj.values.end());
        node.branches.erase(node.branches.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
        break;
      }
    }
  }
}

void balance_node(DecisionNode& node, const std::string& prefix, std::vector<std::string>* log) {
  if (node.is_leaf()) return;
  const std::string label = prefix + node.attribute;
  for (auto& b : node.branches) balance_node(b.child, child_prefix(label, node, b), log);
  if (balance_factor(node) <= 1) return;
  auto taller = [](const Branch& a, const Branch& b) { return height(a.child) > height(b.child); };
  if (std::is_sorted(node.branches.begin(), node.branches.end(), taller)) return;
  std::stable_sort(node.branches.begin(), node.branches.end(), taller);
  if (log) log->push_back("reordered " + label);
}

}  // namespace

PriorityAssignment::PriorityAssignment(std::vector<std::string> ordered, std::size_t checkpoint)
    : ordered_(std::move(ordered)), checkpoint_(checkpoint) {
  for (std::size_t i = 0; i < ordered_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_equal(ordered_[i], ordered_[j])) {
        throw Error("attribute '" + ordered_[i] + "' ranked twice");
      }
    }
  }
}

PriorityAssignment PriorityAssignment::from(const InductionConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& p : cfg.priorities) names.push_back(p.attribute);
  auto n = names.size();
  return PriorityAssignment(std::move(names), n);
}

std::size_t PriorityAssignment::rank(std::string_view attribute) const {
  for (std::size_t i = 0; i < ordered_.size(); ++i) {
    if (names_equal(ordered_[i], attribute)) return i + 1;
  }
  return kUnranked;
}

DecisionNode node_merge(const DecisionNode& root, const PriorityAssignment& pa,
                        std::vector<std::string>* log) {
  DecisionNode out = root;
  merge_node(out, "", pa, log);
  return out;
}

std::size_t balance_factor(const DecisionNode& node) {
  if (node.is_leaf()) throw Error("balance factor of a leaf");
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  std::size_t hi = 0;
  for (const auto& b : node.branches) {
    auto h = height(b.child);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return hi - lo;
}

DecisionNode height_balance(const DecisionNode& root, std::vector<std::string>* log) {
  DecisionNode out = root;
  balance_node(out, "", log);
  if (log) log->push_back("tree is balanced");
  return out;
}

DecisionNode height_balance_priority(const Dataset& d, const PriorityAssignment& pa,
                                     const InductionConfig& cfg, std::vector<std::string>* log) {
  if (pa.empty()) throw Error("priority assignment is empty");
  InductionConfig prioritized = cfg;
  prioritized.mode = InductionMode::priority;
  prioritized.priorities.clear();
  for (const auto& name : pa.ordered()) {
    if (!d.find_attribute(name)) {
      throw Error("priority attribute '" + name + "' is not in the dataset");
    }
    PriorityAttribute p{name, {}};
    for (const auto& given : cfg.priorities) {
      if (names_equal(given.attribute, name)) p.value_order = given.value_order;
    }
    prioritized.priorities.push_back(std::move(p));
  }
  auto tree = build_tree(d, prioritized);
  if (log) {
    std::string order;
    for (const auto& p : prioritized.priorities) order += (order.empty() ? "" : ", ") + p.attribute;
    log->push_back("rebuilt with priority order " + order);
  }
  return height_balance(tree, log);
}

}  // namespace entrotree
