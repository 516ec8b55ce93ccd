#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entrotree/concept_hierarchy.hpp"
#include "entrotree/dataset.hpp"
#include "entrotree/tree.hpp"

namespace entrotree {

enum class InductionMode { baseline_gain, priority };

struct PriorityAttribute {
  std::string attribute;
  // Branch order for the attribute's values; observed values not listed here
  // follow in first-seen order.
  std::vector<std::string> value_order;
};

struct InductionConfig {
  InductionMode mode = InductionMode::baseline_gain;
  // Highest priority first.
  std::vector<PriorityAttribute> priorities;
  // Exception threshold: subsets holding less than this fraction of the total
  // training count become leaves.
  double epsilon = 0.0;
  // Classification threshold: a subset whose majority class reaches this
  // fraction of its count becomes a leaf.
  double kappa = 1.0;
  // A gain-selected split needs at least two branches carrying this much
  // tuple weight (J48's minNumObj). Priority splits are exempt.
  std::size_t min_objects = 2;
  // Restricts candidate attributes; empty means every non-class attribute.
  std::vector<std::string> candidates;

  void validate() const;
};

struct SplitChoice {
  std::size_t attribute = 0;
  double gain = 0;
  // Numeric splits only.
  std::optional<double> threshold;
  // Chosen because of user priority rather than gain.
  bool forced = false;
};

// Picks the test for a node holding `rows`. `remaining` lists attributes still
// available on this path. Priority attributes (in rank order) win whenever
// they have two or more observed values; otherwise the admissible attribute
// with the largest positive gain is chosen, ties going to schema order.
std::optional<SplitChoice> select_split(const Dataset& d, std::span<const std::size_t> rows,
                                        std::span<const std::size_t> remaining,
                                        const InductionConfig& cfg);

DecisionNode build_tree(const Dataset& d, const InductionConfig& cfg);

struct NumericSplit {
  double threshold = 0;
  double gain = 0;
};

// Best binary split attr <= t / attr > t over midpoints of consecutive sorted
// distinct values. Ties keep the smallest threshold.
NumericSplit split_numeric(const Dataset& d, std::size_t attr, std::span<const std::size_t> rows);
NumericSplit split_numeric(const Dataset& d, std::string_view attr);

// Re-tests the node at `path` one hierarchy level higher (roll-up) or lower
// (drill-down): its training rows are re-partitioned at the new abstraction and
// the children are rebuilt with `cfg`. The rest of the tree is unchanged.
DecisionNode rollup_node(const DecisionNode& root, const std::vector<std::size_t>& path,
                         std::shared_ptr<const ConceptHierarchy> h, const Dataset& d,
                         const InductionConfig& cfg);
DecisionNode drilldown_node(const DecisionNode& root, const std::vector<std::size_t>& path,
                            std::shared_ptr<const ConceptHierarchy> h, const Dataset& d,
                            const InductionConfig& cfg);

}  // namespace entrotree
