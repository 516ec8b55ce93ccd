#include <algorithm>
#include <set>

#include "entrotree/dmql.hpp"
#include "entrotree/restructure.hpp"

namespace entrotree::dmql {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

bool contains_key(const std::vector<std::string>& values, std::string_view v) {
  auto key = value_key(v);
  return std::any_of(values.begin(), values.end(),
                     [&](const auto& x) { return value_key(x) == key; });
}

const ConceptHierarchy& hierarchy_with_level(const CatalogEntry& entry, std::string_view level,
                                             const std::string& dataset) {
  for (const auto& h : entry.hierarchies) {
    if (h.find_level(level)) return h;
  }
  throw Error("no hierarchy registered for '" + dataset + "' has a level named '" +
              std::string(level) + "'");
}

void check_bindings(const DmqlQuery& q, const ConceptHierarchy& h, const Dataset& d,
                    std::size_t attr, std::size_t from_level, QueryResult& result) {
  for (const auto& b : q.bindings) {
    auto level = h.find_level(b.name);
    if (!level) {
      result.warnings.push_back("binding '" + b.name + "' does not name a level of the '" +
                                h.attribute() + "' hierarchy");
      continue;
    }
    for (const auto& v : b.values) {
      if (!h.contains(v) || h.level_of(v) != *level) {
        result.warnings.push_back("binding '" + b.name + "': '" + v + "' is not a " +
                                  h.levels()[*level] + " concept");
      }
    }
    if (*level == from_level) {
      for (const auto& label : d.labels(attr)) {
        if (!contains_key(b.values, label)) {
          result.warnings.push_back("value '" + label + "' of '" + d.attribute(attr).name +
                                    "' is not listed in binding '" + b.name + "'");
        }
      }
    }
  }
}

QueryResult run_generalize(const DmqlQuery& q, const CatalogEntry& entry) {
  QueryResult result;
  result.task = Task::generalize;
  if (q.count_attribute) result.count_column = *q.count_attribute;
  const Dataset& source = entry.data;

  const auto& h = hierarchy_with_level(entry, q.target, q.source_dataset);
  auto attr = source.find_attribute(h.attribute());
  if (!attr) {
    throw Error("hierarchy attribute '" + h.attribute() + "' is not in dataset '" +
                q.source_dataset + "'");
  }
  const std::size_t from_level = *h.find_level(q.target);
  auto to_level = h.find_level(q.replace->to_level);
  if (!to_level) {
    throw Error("hierarchy for '" + h.attribute() + "' has no level named '" +
                q.replace->to_level + "'");
  }
  if (*to_level < from_level) {
    throw Error("level '" + q.replace->to_level + "' is below '" + q.target + "'");
  }
  for (const auto& label : source.labels(*attr)) {
    if (!h.contains(label)) {
      throw Error("value '" + label + "' of '" + h.attribute() +
                  "' is not covered by the hierarchy");
    }
  }
  check_bindings(q, h, source, *attr, from_level, result);

  // Lowest level whose concepts are all replacement targets; failing that the
  // lowest level within the target count, else the `till` level.
  const auto& targets = q.replace->target_values;
  auto concepts_at = [&](std::size_t level) {
    std::set<std::string> keys;
    std::vector<std::string> out;
    for (std::size_t r = 0; r < source.size(); ++r) {
      auto c = h.ascend_to_level(source.label(r, *attr), level);
      if (keys.insert(value_key(c)).second) out.push_back(c);
    }
    return out;
  };
  std::optional<std::size_t> chosen;
  for (auto level = from_level; level <= *to_level && !chosen; ++level) {
    auto cs = concepts_at(level);
    if (std::all_of(cs.begin(), cs.end(), [&](const auto& c) { return contains_key(targets, c); })) {
      chosen = level;
    }
  }
  for (auto level = from_level; level <= *to_level && !chosen; ++level) {
    if (concepts_at(level).size() <= targets.size()) chosen = level;
  }
  const std::size_t level = chosen.value_or(*to_level);
  for (const auto& c : concepts_at(level)) {
    if (!contains_key(targets, c)) {
      result.warnings.push_back("generalized value '" + c + "' is not a replacement target");
    }
  }

  std::vector<std::string> numeric;
  for (const auto& a : source.schema()) {
    if (a.kind == AttributeKind::numeric) numeric.push_back(a.name);
  }
  Dataset d = generalize_to_level(source, h.attribute(), h, level, numeric);
  const std::string old_name = d.attribute(*attr).name;
  d = rename_attribute(d, old_name, q.replace->new_attribute);
  result.log.push_back("generalized " + old_name + " to level " + h.levels()[level] + " as " +
                       q.replace->new_attribute);

  // Relevant attributes (class first) plus summed numeric attributes.
  std::vector<std::string> relevance = q.relevance;
  if (relevance.empty()) relevance.push_back(q.replace->new_attribute);
  std::vector<std::size_t> keep;
  for (const auto& name : relevance) {
    auto a = d.find_attribute(name);
    if (!a && names_equal(name, old_name)) a = d.find_attribute(q.replace->new_attribute);
    if (!a) throw Error("unknown attribute '" + name + "' in relevance list");
    if (std::find(keep.begin(), keep.end(), *a) == keep.end()) keep.push_back(*a);
  }
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    if (d.attribute(a).kind == AttributeKind::numeric &&
        std::find(keep.begin(), keep.end(), a) == keep.end()) {
      keep.push_back(a);
    }
  }
  Dataset projected = project(d, keep);
  const std::string class_name = projected.attribute(0).name;
  if (projected.attribute(0).kind == AttributeKind::nominal) {
    projected = with_class(projected, class_name);
  }
  std::vector<std::size_t> sums;
  for (std::size_t a = 0; a < projected.attribute_count(); ++a) {
    if (projected.attribute(a).kind == AttributeKind::numeric &&
        projected.attribute(a).role != AttributeRole::class_label) {
      sums.push_back(a);
    }
  }
  result.generalized = merge_identical_tuples(projected, sums);
  return result;
}

QueryResult run_classify(const DmqlQuery& q, const CatalogEntry& entry,
                         const ExecuteOptions& options) {
  QueryResult result;
  result.task = Task::classify_tree;
  Dataset d = with_class(entry.data, q.relevance.front());

  if (q.leaf_count_attr) {
    d.attribute_index(*q.leaf_count_attr);
    result.leaf_count_attr = q.leaf_count_attr;
  }

  InductionConfig base = options.induction;
  base.mode = InductionMode::baseline_gain;
  base.priorities.clear();
  std::vector<std::string> priority_names;
  for (const auto& p : q.priorities) {
    auto a = d.find_attribute(p.attribute);
    if (!a) throw Error("unknown priority attribute '" + p.attribute + "'");
    if (d.attribute(*a).kind == AttributeKind::nominal) {
      for (const auto& v : p.value_order) {
        if (!d.find_code(*a, v)) {
          result.warnings.push_back("priority value '" + v + "' of '" + p.attribute +
                                    "' does not occur in the data");
        }
      }
    }
    base.priorities.push_back({d.attribute(*a).name, p.value_order});
    priority_names.push_back(d.attribute(*a).name);
  }

  // Extra relevance entries restrict the candidate attributes.
  for (std::size_t i = 1; i < q.relevance.size(); ++i) {
    base.candidates.push_back(d.attribute(d.attribute_index(q.relevance[i])).name);
  }
  if (options.relevance) {
    auto kept = relevance_filter(d, *options.relevance, priority_names);
    if (base.candidates.empty()) {
      base.candidates = kept;
    } else {
      std::erase_if(base.candidates, [&](const auto& c) { return !contains_key(kept, c); });
    }
    result.log.push_back("relevance analysis kept " + join(kept));
  }
  for (const auto& p : priority_names) {
    if (!base.candidates.empty() && !contains_key(base.candidates, p)) {
      base.candidates.push_back(p);
    }
  }

  result.baseline = build_tree(d, base);
  DecisionNode tree = *result.baseline;
  if (!priority_names.empty()) {
    PriorityAssignment pa(priority_names, options.checkpoint.value_or(priority_names.size()));
    tree = height_balance_priority(d, pa, base, &result.log);
    if (options.merge) tree = node_merge(tree, pa, &result.log);
  } else if (options.merge) {
    tree = node_merge(tree, PriorityAssignment{}, &result.log);
  }
  if (options.balance) tree = height_balance(tree, &result.log);

  result.rules = extract_rules(tree);
  result.report = compare_trees(*result.baseline, tree, priority_names);
  result.tree = std::move(tree);
  return result;
}

}  // namespace

const CatalogEntry& lookup(const Catalog& catalog, std::string_view name) {
  for (const auto& [key, entry] : catalog) {
    if (names_equal(key, name)) return entry;
  }
  throw Error("unknown dataset '" + std::string(name) + "'");
}

QueryResult execute(const DmqlQuery& q, const Catalog& catalog, const ExecuteOptions& options) {
  const auto& entry = lookup(catalog, q.source_dataset);
  if (q.task == Task::generalize) return run_generalize(q, entry);
  return run_classify(q, entry, options);
}

}  // namespace entrotree::dmql
