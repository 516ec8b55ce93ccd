#include "entrotree/induction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "entrotree/entropy.hpp"

namespace entrotree {

namespace {

constexpr double kGainEpsilon = 1e-12;

std::vector<std::size_t> resolve_priorities(const Dataset& d, const InductionConfig& cfg) {
  std::vector<std::size_t> out;
  auto cls = d.require_class();
  for (const auto& p : cfg.priorities) {
    auto a = d.find_attribute(p.attribute);
    if (!a) throw Error("priority attribute '" + p.attribute + "' is not in the dataset");
    if (*a == cls) throw Error("priority attribute '" + p.attribute + "' is the class");
    if (std::find(out.begin(), out.end(), *a) != out.end()) {
      throw Error("priority attribute '" + p.attribute + "' listed twice");
    }
    out.push_back(*a);
  }
  return out;
}

std::size_t distinct_values(const Dataset& d, std::size_t attr, std::span<const std::size_t> rows) {
  if (d.attribute(attr).kind == AttributeKind::numeric) {
    std::set<double> seen;
    for (auto r : rows) seen.insert(d.number(r, attr));
    return seen.size();
  }
  std::set<std::uint32_t> seen;
  for (auto r : rows) seen.insert(d.code(r, attr));
  return seen.size();
}

// Weight-sorted scan over midpoints; sides lighter than min_weight are skipped.
std::optional<NumericSplit> best_numeric_split(const Dataset& d, std::size_t attr,
                                               std::span<const std::size_t> rows,
                                               std::uint64_t min_weight) {
  auto cls = d.require_class();
  const auto classes = d.labels(cls).size();
  std::map<double, std::vector<std::uint64_t>> by_value;
  std::vector<std::uint64_t> total(classes, 0);
  for (auto r : rows) {
    auto& h = by_value[d.number(r, attr)];
    if (h.empty()) h.assign(classes, 0);
    h[d.code(r, cls)] += d.count(r);
    total[d.code(r, cls)] += d.count(r);
  }
  if (by_value.size() < 2) return std::nullopt;

  std::uint64_t n = 0;
  for (auto c : total) n += c;
  const double base = expected_info(total);

  std::optional<NumericSplit> best;
  std::vector<std::uint64_t> left(classes, 0);
  std::uint64_t left_n = 0;
  for (auto it = by_value.begin(); std::next(it) != by_value.end(); ++it) {
    for (std::size_t c = 0; c < classes; ++c) {
      left[c] += it->second[c];
      left_n += it->second[c];
    }
    std::uint64_t right_n = n - left_n;
    if (left_n < min_weight || right_n < min_weight) continue;
    std::vector<std::uint64_t> right(classes);
    for (std::size_t c = 0; c < classes; ++c) right[c] = total[c] - left[c];
    double e = static_cast<double>(left_n) / static_cast<double>(n) * expected_info(left) +
               static_cast<double>(right_n) / static_cast<double>(n) * expected_info(right);
    double gain = base - e;
    double t = (it->first + std::next(it)->first) / 2.0;
    if (!best || gain > best->gain + kGainEpsilon) best = NumericSplit{t, gain};
  }
  return best;
}

// J48-style admissibility: at least two partitions carry min_objects weight.
bool admissible(const Dataset& d, std::size_t attr, std::span<const std::size_t> rows,
                std::size_t min_objects) {
  std::map<std::uint32_t, std::uint64_t> weight;
  for (auto r : rows) weight[d.code(r, attr)] += d.count(r);
  std::size_t heavy = 0;
  for (const auto& [code, w] : weight) {
    if (w >= min_objects) ++heavy;
  }
  return heavy >= 2;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& d, const InductionConfig& cfg)
      : d_(d), cfg_(cfg), cls_(d.require_class()), total_(d.total_count()) {
    cfg_.validate();
    if (d_.attribute(cls_).kind != AttributeKind::nominal) {
      throw Error("class attribute '" + d_.attribute(cls_).name + "' must be nominal");
    }
    if (cfg_.mode == InductionMode::priority) priority_ = resolve_priorities(d_, cfg_);
    for (const auto& name : cfg_.candidates) {
      if (!d_.find_attribute(name)) throw Error("unknown candidate attribute '" + name + "'");
    }
  }

  std::vector<std::size_t> initial_attributes() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < d_.attribute_count(); ++a) {
      if (a == cls_) continue;
      bool listed = cfg_.candidates.empty() ||
                    std::any_of(cfg_.candidates.begin(), cfg_.candidates.end(),
                                [&](const auto& n) { return names_equal(n, d_.attribute(a).name); });
      bool prioritized = std::find(priority_.begin(), priority_.end(), a) != priority_.end();
      if (listed || prioritized) out.push_back(a);
    }
    return out;
  }

  std::optional<SplitChoice> choose(std::span<const std::size_t> rows,
                                    std::span<const std::size_t> remaining) const {
    auto in_remaining = [&](std::size_t a) {
      return std::find(remaining.begin(), remaining.end(), a) != remaining.end();
    };
    for (auto p : priority_) {
      if (!in_remaining(p) || distinct_values(d_, p, rows) < 2) continue;
      SplitChoice choice{p, 0, std::nullopt, true};
      if (d_.attribute(p).kind == AttributeKind::numeric) {
        auto s = *best_numeric_split(d_, p, rows, 0);
        choice.threshold = s.threshold;
        choice.gain = s.gain;
      } else {
        choice.gain = info_gain(d_, p, rows);
      }
      return choice;
    }

    std::optional<SplitChoice> best;
    for (auto a : remaining) {
      if (distinct_values(d_, a, rows) < 2) continue;
      SplitChoice c{a, 0, std::nullopt, false};
      if (d_.attribute(a).kind == AttributeKind::numeric) {
        auto s = best_numeric_split(d_, a, rows, cfg_.min_objects);
        if (!s) continue;
        c.threshold = s->threshold;
        c.gain = s->gain;
      } else {
        if (!admissible(d_, a, rows, cfg_.min_objects)) continue;
        c.gain = info_gain(d_, a, rows);
      }
      if (c.gain <= kGainEpsilon) continue;
      if (!best || c.gain > best->gain + kGainEpsilon) best = c;
    }
    return best;
  }

  DecisionNode build(const std::vector<std::size_t>& rows,
                     const std::vector<std::size_t>& remaining) const {
    auto dist = class_distribution(d_, rows);
    const double fraction = static_cast<double>(dist.total()) / static_cast<double>(total_);
    if (fraction < cfg_.epsilon) return DecisionNode::leaf(std::move(dist));

    auto choice = choose(rows, remaining);
    if (!choice) return DecisionNode::leaf(std::move(dist));
    if (!choice->forced && dist.majority_fraction() >= cfg_.kappa) {
      return DecisionNode::leaf(std::move(dist));
    }
    return split(rows, remaining, *choice, std::move(dist));
  }

  DecisionNode split(const std::vector<std::size_t>& rows,
                     const std::vector<std::size_t>& remaining, const SplitChoice& choice,
                     ClassDistribution dist) const {
    const auto attr = choice.attribute;
    DecisionNode node;
    node.attribute = d_.attribute(attr).name;
    node.kind = d_.attribute(attr).kind;
    node.distribution = std::move(dist);

    std::vector<std::size_t> next = remaining;
    const bool consume = node.kind == AttributeKind::nominal ||
                         std::find(priority_.begin(), priority_.end(), attr) != priority_.end();
    if (consume) std::erase(next, attr);

    if (node.kind == AttributeKind::numeric) {
      node.threshold = *choice.threshold;
      std::vector<std::size_t> low, high;
      for (auto r : rows) (d_.number(r, attr) <= node.threshold ? low : high).push_back(r);
      node.branches.push_back(Branch{{}, Side::at_most, build(low, next)});
      node.branches.push_back(Branch{{}, Side::greater, build(high, next)});
      return node;
    }

    for (auto code : branch_order(attr, rows)) {
      std::vector<std::size_t> part;
      for (auto r : rows) {
        if (d_.code(r, attr) == code) part.push_back(r);
      }
      node.branches.push_back(Branch{{d_.labels(attr)[code]}, Side::at_most, build(part, next)});
    }
    return node;
  }

  // Codes observed in rows: priority value order first, then first-seen order.
  std::vector<std::uint32_t> branch_order(std::size_t attr,
                                          std::span<const std::size_t> rows) const {
    std::set<std::uint32_t> present;
    for (auto r : rows) present.insert(d_.code(r, attr));
    std::vector<std::uint32_t> order;
    for (const auto& p : cfg_.priorities) {
      if (!names_equal(p.attribute, d_.attribute(attr).name)) continue;
      for (const auto& v : p.value_order) {
        auto code = d_.find_code(attr, v);
        if (code && present.count(*code) &&
            std::find(order.begin(), order.end(), *code) == order.end()) {
          order.push_back(*code);
        }
      }
    }
    for (auto code : present) {
      if (std::find(order.begin(), order.end(), code) == order.end()) order.push_back(code);
    }
    return order;
  }

  std::size_t class_index() const { return cls_; }

 private:
  const Dataset& d_;
  InductionConfig cfg_;
  std::size_t cls_;
  std::uint64_t total_;
  std::vector<std::size_t> priority_;
};

DecisionNode regeneralize(const DecisionNode& root, const std::vector<std::size_t>& path,
                          std::shared_ptr<const ConceptHierarchy> h, const Dataset& d,
                          const InductionConfig& cfg, bool up) {
  if (!h) throw Error("no concept hierarchy given");
  const DecisionNode& target = node_at(root, path);
  if (target.is_leaf()) throw Error("cannot roll up or drill down a leaf");
  if (target.kind != AttributeKind::nominal) {
    throw Error("attribute '" + target.attribute + "' is numeric");
  }
  auto attr = d.attribute_index(target.attribute);
  for (const auto& label : d.labels(attr)) {
    if (!h->contains(label)) {
      throw Error("attribute '" + target.attribute + "' is not covered by the hierarchy");
    }
  }

  std::size_t level = target.hierarchy ? target.level : 0;
  if (up) {
    if (level >= h->top_level()) return root;
    ++level;
  } else {
    if (level == 0) throw Error("node is already at the primitive level");
    --level;
  }

  TreeBuilder builder(d, cfg);
  auto rows = rows_at(root, path, d);
  auto remaining = builder.initial_attributes();
  const DecisionNode* n = &root;
  for (auto i : path) {
    if (n->kind == AttributeKind::nominal) {
      if (auto a = d.find_attribute(n->attribute)) std::erase(remaining, *a);
    }
    n = &n->branches[i].child;
  }
  std::erase(remaining, attr);

  // Concepts at the new level, ordered by the first primitive label mapping to them.
  std::vector<std::string> concepts;
  std::set<std::string> seen_keys;
  std::set<std::string> present;
  for (auto r : rows) present.insert(value_key(h->ascend_to_level(d.label(r, attr), level)));
  for (const auto& label : d.labels(attr)) {
    auto c = h->ascend_to_level(label, level);
    auto key = value_key(c);
    if (present.count(key) && seen_keys.insert(key).second) concepts.push_back(c);
  }

  DecisionNode rebuilt;
  rebuilt.attribute = target.attribute;
  rebuilt.kind = AttributeKind::nominal;
  rebuilt.distribution = target.distribution;
  if (level > 0) {
    rebuilt.hierarchy = h;
    rebuilt.level = level;
  }
  for (const auto& c : concepts) {
    std::vector<std::size_t> part;
    for (auto r : rows) {
      if (value_key(h->ascend_to_level(d.label(r, attr), level)) == value_key(c)) {
        part.push_back(r);
      }
    }
    rebuilt.branches.push_back(Branch{{c}, Side::at_most, builder.build(part, remaining)});
  }

  DecisionNode out = root;
  node_at(out, path) = std::move(rebuilt);
  return out;
}

}  // namespace

void InductionConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error("epsilon must lie in [0, 1]");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw Error("kappa must lie in (0, 1]");
  if (mode == InductionMode::priority && priorities.empty()) {
    throw Error("priority mode needs at least one priority attribute");
  }
}

std::optional<SplitChoice> select_split(const Dataset& d, std::span<const std::size_t> rows,
                                        std::span<const std::size_t> remaining,
                                        const InductionConfig& cfg) {
  if (remaining.empty() || rows.empty()) return std::nullopt;
  TreeBuilder builder(d, cfg);
  return builder.choose(rows, remaining);
}

DecisionNode build_tree(const Dataset& d, const InductionConfig& cfg) {
  if (d.empty()) throw Error("cannot build a tree from an empty dataset");
  TreeBuilder builder(d, cfg);
  return builder.build(all_rows(d), builder.initial_attributes());
}

NumericSplit split_numeric(const Dataset& d, std::size_t attr, std::span<const std::size_t> rows) {
  if (d.attribute(attr).kind != AttributeKind::numeric) {
    throw Error("attribute '" + d.attribute(attr).name + "' is not numeric");
  }
  auto s = best_numeric_split(d, attr, rows, 0);
  if (!s) {
    throw Error("attribute '" + d.attribute(attr).name + "' needs at least two distinct values");
  }
  return *s;
}

NumericSplit split_numeric(const Dataset& d, std::string_view attr) {
  return split_numeric(d, d.attribute_index(attr), all_rows(d));
}

DecisionNode rollup_node(const DecisionNode& root, const std::vector<std::size_t>& path,
                         std::shared_ptr<const ConceptHierarchy> h, const Dataset& d,
                         const InductionConfig& cfg) {
  return regeneralize(root, path, std::move(h), d, cfg, true);
}

DecisionNode drilldown_node(const DecisionNode& root, const std::vector<std::size_t>& path,
                            std::shared_ptr<const ConceptHierarchy> h, const Dataset& d,
                            const InductionConfig& cfg) {
  return regeneralize(root, path, std::move(h), d, cfg, false);
}

}  // namespace entrotree
