#include "entrotree/concept_hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace entrotree {

namespace {

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss{std::string(s)};
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::size_t distinct_nominal(const Dataset& d, std::size_t attr) {
  std::set<std::uint32_t> seen;
  for (std::size_t r = 0; r < d.size(); ++r) seen.insert(d.code(r, attr));
  return seen.size();
}

std::vector<std::size_t> resolve(const Dataset& d, std::span<const std::string> names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto a = d.attribute_index(n);
    if (d.attribute(a).kind != AttributeKind::numeric) {
      throw Error("aggregate attribute '" + n + "' is not numeric");
    }
    out.push_back(a);
  }
  return out;
}

// Rewrites one nominal column through `map` and merges the result.
template <typename Map>
Dataset rewrite_column(const Dataset& d, std::size_t attr, Map&& map,
                       std::span<const std::size_t> sum_attrs) {
  Dataset out(d.schema());
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    if (a == attr || d.attribute(a).kind != AttributeKind::nominal) continue;
    for (const auto& l : d.labels(a)) out.intern(a, l);
  }
  for (std::size_t r = 0; r < d.size(); ++r) {
    auto row = d.row(r);
    row[attr] = map(d.label(r, attr));
    out.append(row, d.count(r));
  }
  return merge_identical_tuples(out, sum_attrs);
}

}  // namespace

ConceptHierarchy ConceptHierarchy::parse(std::string_view text) {
  ConceptHierarchy h;
  std::stringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::string, std::string>> links;  // child key, parent key
  auto where = [&] { return "hierarchy line " + std::to_string(line_no) + ": "; };

  auto declare = [&](const std::string& value) {
    auto key = value_key(value);
    if (!h.nodes_.count(key)) {
      h.nodes_.emplace(key, Node{value, std::nullopt, 0});
      h.order_.push_back(key);
    }
    return key;
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto t = trim(line);
    if (t.empty()) continue;

    auto arrow = t.find("->");
    auto colon = t.find(':');
    if (arrow == std::string::npos && colon != std::string::npos) {
      auto key = value_key(t.substr(0, colon));
      auto rest = trim(t.substr(colon + 1));
      if (key == "attribute") {
        h.attribute_ = rest;
      } else if (key == "levels") {
        h.levels_ = split_list(rest);
      } else {
        throw Error(where() + "unknown header '" + trim(t.substr(0, colon)) + "'");
      }
      continue;
    }
    if (arrow == std::string::npos) {
      declare(t);
      continue;
    }
    auto child = trim(t.substr(0, arrow));
    auto parent = trim(t.substr(arrow + 2));
    if (child.empty() || parent.empty()) throw Error(where() + "expected 'child -> parent'");
    auto ck = declare(child);
    auto pk = declare(parent);
    auto& node = h.nodes_.at(ck);
    if (node.parent) {
      throw Error(where() + "duplicate mapping for '" + child + "'");
    }
    node.parent = pk;
    links.emplace_back(ck, pk);
  }

  if (h.levels_.empty()) throw Error("hierarchy: missing 'levels:' header");
  if (h.nodes_.empty()) throw Error("hierarchy: no values declared");

  // Depth below a root; detects cycles.
  std::unordered_map<std::string, std::size_t> depth;
  for (const auto& key : h.order_) {
    std::vector<std::string> chain;
    std::set<std::string> on_chain;
    std::string cur = key;
    std::size_t base = 0;
    while (true) {
      if (auto it = depth.find(cur); it != depth.end()) {
        base = it->second;
        break;
      }
      if (!on_chain.insert(cur).second) {
        throw Error("hierarchy: cycle detected at '" + h.nodes_.at(cur).display + "'");
      }
      chain.push_back(cur);
      const auto& n = h.nodes_.at(cur);
      if (!n.parent) {
        depth[cur] = 0;
        chain.pop_back();
        base = 0;
        break;
      }
      cur = *n.parent;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[*it] = ++base;
  }

  std::set<std::string> has_child;
  for (const auto& [child, parent] : links) has_child.insert(parent);
  const std::size_t top = h.levels_.size() - 1;
  for (const auto& key : h.order_) {
    auto d = depth.at(key);
    auto& n = h.nodes_.at(key);
    if (d > top) {
      throw Error("hierarchy: '" + n.display + "' is " + std::to_string(d) +
                  " links below the top but only " + std::to_string(h.levels_.size()) +
                  " levels are declared");
    }
    if (!has_child.count(key) && d != top) {
      throw Error("hierarchy: orphan value '" + n.display + "' has no path from level '" +
                  h.levels_.front() + "' to the top level");
    }
    n.level = top - d;
  }
  return h;
}

ConceptHierarchy ConceptHierarchy::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open hierarchy file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto h = parse(ss.str());
  if (h.attribute_.empty()) h.attribute_ = path.stem().string();
  return h;
}

std::optional<std::size_t> ConceptHierarchy::find_level(std::string_view name) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (names_equal(levels_[i], name)) return i;
  }
  return std::nullopt;
}

bool ConceptHierarchy::contains(std::string_view value) const {
  return nodes_.count(value_key(value)) > 0;
}

const ConceptHierarchy::Node& ConceptHierarchy::node(std::string_view value) const {
  auto it = nodes_.find(value_key(value));
  if (it == nodes_.end()) {
    throw Error("value '" + std::string(value) + "' is not in the hierarchy for '" +
                attribute_ + "'");
  }
  return it->second;
}

std::size_t ConceptHierarchy::level_of(std::string_view value) const {
  return node(value).level;
}

const std::string& ConceptHierarchy::display(std::string_view value) const {
  return node(value).display;
}

std::string ConceptHierarchy::ascend(std::string_view value, std::size_t steps) const {
  const Node* n = &node(value);
  while (steps > 0 && n->parent) {
    n = &nodes_.at(*n->parent);
    --steps;
  }
  return n->display;
}

std::string ConceptHierarchy::ascend_to_level(std::string_view value, std::size_t level) const {
  const Node* n = &node(value);
  while (n->level < level && n->parent) n = &nodes_.at(*n->parent);
  return n->display;
}

std::vector<std::string> ConceptHierarchy::values_at_level(std::size_t level) const {
  std::vector<std::string> out;
  for (const auto& key : order_) {
    const auto& n = nodes_.at(key);
    if (n.level == level) out.push_back(n.display);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> AoiConfig::threshold_for(std::string_view attr) const {
  for (const auto& [name, t] : thresholds) {
    if (names_equal(name, attr)) return t;
  }
  return default_threshold;
}

Aggregate AoiConfig::aggregate_for(std::string_view attr) const {
  for (const auto& [name, a] : aggregates) {
    if (names_equal(name, attr)) return a;
  }
  return Aggregate::none;
}

Dataset generalize_to_level(const Dataset& d, std::string_view attr_name,
                            const ConceptHierarchy& h, std::size_t level,
                            std::span<const std::string> sum_attrs) {
  auto attr = d.attribute_index(attr_name);
  if (d.attribute(attr).kind != AttributeKind::nominal) {
    throw Error("cannot generalize numeric attribute '" + d.attribute(attr).name + "'");
  }
  auto sums = resolve(d, sum_attrs);
  return rewrite_column(
      d, attr, [&](const std::string& v) { return h.ascend_to_level(v, level); }, sums);
}

Dataset generalize_attribute(const Dataset& d, std::string_view attr_name,
                             const ConceptHierarchy& h, std::size_t threshold,
                             std::span<const std::string> sum_attrs) {
  if (threshold == 0) throw Error("generalization threshold must be at least 1");
  auto attr = d.attribute_index(attr_name);
  if (d.attribute(attr).kind != AttributeKind::nominal) {
    throw Error("cannot generalize numeric attribute '" + d.attribute(attr).name + "'");
  }
  for (const auto& label : d.labels(attr)) {
    if (!h.contains(label)) {
      throw Error("value '" + label + "' of '" + d.attribute(attr).name +
                  "' is not covered by the hierarchy");
    }
  }

  auto sums = resolve(d, sum_attrs);
  Dataset current = merge_identical_tuples(d, sums);
  std::size_t level = 0;
  for (std::size_t r = 0; r < current.size(); ++r) {
    level = std::max(level, h.level_of(current.label(r, attr)));
  }
  // Sums are already folded in; only the generalized column changes below.
  auto already_summed = std::span<const std::size_t>(sums);
  while (distinct_nominal(current, attr) > threshold && level < h.top_level()) {
    ++level;
    current = rewrite_column(
        current, attr, [&](const std::string& v) { return h.ascend_to_level(v, level); },
        already_summed);
  }
  return current;
}

Dataset remove_attribute(const Dataset& d, std::string_view attr_name) {
  auto attr = d.attribute_index(attr_name);
  if (d.attribute(attr).role == AttributeRole::class_label) {
    throw Error("cannot remove the class attribute '" + d.attribute(attr).name + "'");
  }
  std::vector<std::size_t> keep;
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    if (a != attr) keep.push_back(a);
  }
  auto projected = project(d, keep);
  std::vector<std::size_t> sums;
  for (std::size_t a = 0; a < projected.attribute_count(); ++a) {
    if (projected.attribute(a).holds_totals) sums.push_back(a);
  }
  return merge_identical_tuples(projected, sums);
}

const ConceptHierarchy* find_hierarchy(std::span<const ConceptHierarchy> hierarchies,
                                       std::string_view attribute) {
  for (const auto& h : hierarchies) {
    if (names_equal(h.attribute(), attribute)) return &h;
  }
  return nullptr;
}

Dataset aoi(const Dataset& d, std::span<const ConceptHierarchy> hierarchies,
            const AoiConfig& config) {
  // Numeric attributes: keep the summed ones, drop the rest.
  std::vector<std::size_t> keep;
  std::vector<std::string> sum_names;
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    const auto& attr = d.attribute(a);
    if (attr.kind == AttributeKind::numeric && attr.role != AttributeRole::class_label) {
      if (config.aggregate_for(attr.name) != Aggregate::sum) continue;
      sum_names.push_back(attr.name);
    }
    keep.push_back(a);
  }
  Dataset current = project(d, keep);
  current = merge_identical_tuples(current, resolve(current, sum_names));

  std::vector<std::string> nominal;
  for (const auto& attr : current.schema()) {
    if (attr.kind == AttributeKind::nominal) nominal.push_back(attr.name);
  }
  for (const auto& name : nominal) {
    auto threshold = config.threshold_for(name);
    if (!threshold) continue;
    auto a = current.attribute_index(name);
    if (const auto* h = find_hierarchy(hierarchies, name)) {
      current = generalize_attribute(current, name, *h, *threshold, sum_names);
    } else if (distinct_nominal(current, a) > *threshold &&
               current.attribute(a).role != AttributeRole::class_label) {
      current = remove_attribute(current, name);
    }
  }
  return current;
}

}  // namespace entrotree
