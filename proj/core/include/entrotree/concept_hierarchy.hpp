#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entrotree/dataset.hpp"

namespace entrotree {

// A value -> ancestor tree for one attribute, with named levels ordered from
// primitive (level 0) to the top. Text form:
//
//   attribute: region
//   levels: Region_Data, Country_Data, World_Data
//   India.east -> India
//   India -> World
//
// A line holding a single value declares it without a parent (needed for
// one-level hierarchies). Every primitive value must sit exactly
// levels-1 links below a top-level root.
class ConceptHierarchy {
 public:
  static ConceptHierarchy parse(std::string_view text);
  static ConceptHierarchy load_file(const std::filesystem::path& path);

  const std::string& attribute() const { return attribute_; }
  const std::vector<std::string>& levels() const { return levels_; }
  std::size_t top_level() const { return levels_.size() - 1; }
  std::optional<std::size_t> find_level(std::string_view name) const;

  bool contains(std::string_view value) const;
  std::size_t level_of(std::string_view value) const;
  // Canonical spelling of a known value.
  const std::string& display(std::string_view value) const;

  // Ancestor `steps` levels up, clamped at the top.
  std::string ascend(std::string_view value, std::size_t steps) const;
  // Ancestor at `level`; values already at or above it are returned as-is.
  std::string ascend_to_level(std::string_view value, std::size_t level) const;

  std::vector<std::string> values_at_level(std::size_t level) const;

 private:
  struct Node {
    std::string display;
    std::optional<std::string> parent;  // key of the parent
    std::size_t level = 0;
  };
  const Node& node(std::string_view value) const;

  std::string attribute_;
  std::vector<std::string> levels_;
  std::unordered_map<std::string, Node> nodes_;
  std::vector<std::string> order_;  // keys in declaration order
};

enum class Aggregate { none, sum };

struct AoiConfig {
  // Generalization threshold per attribute (case-insensitive names).
  std::map<std::string, std::size_t> thresholds;
  // Applies to nominal attributes without an entry in `thresholds`; when unset
  // such attributes are kept as they are.
  std::optional<std::size_t> default_threshold;
  // Numeric attributes named `sum` are summed per merged group; all other
  // numeric attributes are dropped by aoi().
  std::map<std::string, Aggregate> aggregates;

  std::optional<std::size_t> threshold_for(std::string_view attr) const;
  Aggregate aggregate_for(std::string_view attr) const;
};

// Ascends `attr` one level at a time until it has at most `threshold` distinct
// values or reaches the top, then merges identical tuples. Numeric attributes
// listed in sum_attrs are summed per group; other numerics stay part of the
// tuple identity.
Dataset generalize_attribute(const Dataset& d, std::string_view attr,
                             const ConceptHierarchy& h, std::size_t threshold,
                             std::span<const std::string> sum_attrs = {});

// Replaces `attr` by its ancestors at `level` and merges.
Dataset generalize_to_level(const Dataset& d, std::string_view attr,
                            const ConceptHierarchy& h, std::size_t level,
                            std::span<const std::string> sum_attrs = {});

// Drops a non-class attribute and merges the now-identical tuples.
Dataset remove_attribute(const Dataset& d, std::string_view attr);

// Full attribute-oriented induction: numeric attributes are summed or dropped,
// each nominal attribute with a hierarchy is generalized to its threshold, and
// nominal attributes over threshold with no hierarchy are removed.
Dataset aoi(const Dataset& d, std::span<const ConceptHierarchy> hierarchies,
            const AoiConfig& config);

const ConceptHierarchy* find_hierarchy(std::span<const ConceptHierarchy> hierarchies,
                                       std::string_view attribute);

}  // namespace entrotree
