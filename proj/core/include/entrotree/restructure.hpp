#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "entrotree/dataset.hpp"
#include "entrotree/induction.hpp"
#include "entrotree/tree.hpp"

namespace entrotree {

// Attribute ranks, 1 = most important. Unlisted attributes rank lowest.
// Subtrees touching an attribute ranked at or above the checkpoint are never
// merged.
class PriorityAssignment {
 public:
  static constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();

  PriorityAssignment() = default;
  PriorityAssignment(std::vector<std::string> ordered, std::size_t checkpoint);
  static PriorityAssignment from(const InductionConfig& cfg);

  std::size_t rank(std::string_view attribute) const;
  std::size_t checkpoint() const { return checkpoint_; }
  bool protects(std::string_view attribute) const { return rank(attribute) <= checkpoint_; }
  bool empty() const { return ordered_.empty(); }
  // Attributes by ascending rank.
  const std::vector<std::string>& ordered() const { return ordered_; }

 private:
  std::vector<std::string> ordered_;
  std::size_t checkpoint_ = 0;
};

// Bottom-up, to a fixpoint: sibling branches with equivalent subtrees (same
// tests and branch structure, leaves with equal majority class) are fused into
// one branch labelled with the union of their values; leaf counts add up.
// Pairs involving a protected attribute are left alone and reported as
// "refused <parent>/<values>: priority"; merges as "merged <parent>/<values>".
DecisionNode node_merge(const DecisionNode& root, const PriorityAssignment& pa,
                        std::vector<std::string>* log = nullptr);

// Tallest minus shortest child subtree height. Throws on a leaf.
std::size_t balance_factor(const DecisionNode& node);

// At every node with balance factor above one, children are stably reordered
// by descending subtree height. Only branch order changes.
DecisionNode height_balance(const DecisionNode& root, std::vector<std::string>* log = nullptr);

// Rebuilds from the training data so every path tests priority attributes in
// rank order before gain-ranked ones, then height-balances. `cfg` supplies the
// terminal settings (epsilon, kappa, min_objects) and optional value orders.
DecisionNode height_balance_priority(const Dataset& d, const PriorityAssignment& pa,
                                     const InductionConfig& cfg,
                                     std::vector<std::string>* log = nullptr);

}  // namespace entrotree
