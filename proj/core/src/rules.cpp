#include "entrotree/rules.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <set>

#include "entrotree/render.hpp"

namespace entrotree {

namespace {

std::string format_threshold(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

void walk(const DecisionNode& node, std::vector<Condition>& path,
          std::vector<ClassificationRule>& out) {
  if (node.is_leaf()) {
    ClassificationRule rule;
    rule.conditions = path;
    rule.distribution = node.distribution;
    rule.support = node.distribution.total();
    rule.conclusion = node.distribution.labels().empty() ? std::string{}
                                                         : node.distribution.majority_label();
    rule.confidence = node.distribution.majority_fraction();
    out.push_back(std::move(rule));
    return;
  }
  for (const auto& b : node.branches) {
    Condition c;
    c.attribute = node.attribute;
    if (node.kind == AttributeKind::numeric) {
      c.op = b.side == Side::at_most ? Condition::Op::at_most : Condition::Op::greater;
      c.threshold = node.threshold;
    } else {
      c.op = Condition::Op::in;
      c.values = b.values;
    }
    path.push_back(std::move(c));
    walk(b.child, path, out);
    path.pop_back();
  }
}

void visit_metrics(const DecisionNode& node, TreeMetrics& m) {
  if (node.is_leaf()) {
    ++m.leaves;
    return;
  }
  ++m.internal_nodes;
  if (std::none_of(m.attributes_used.begin(), m.attributes_used.end(),
                   [&](const auto& a) { return names_equal(a, node.attribute); })) {
    m.attributes_used.push_back(node.attribute);
  }
  for (const auto& b : node.branches) visit_metrics(b.child, m);
}

bool uses(const TreeMetrics& m, const std::string& attr) {
  return std::any_of(m.attributes_used.begin(), m.attributes_used.end(),
                     [&](const auto& a) { return names_equal(a, attr); });
}

}  // namespace

std::string Condition::to_string() const {
  switch (op) {
    case Op::at_most:
      return attribute + "<=" + format_threshold(threshold);
    case Op::greater:
      return attribute + ">" + format_threshold(threshold);
    case Op::in:
      break;
  }
  if (values.size() == 1) return attribute + "=" + values.front();
  std::string out = attribute + " in {";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += values[i];
  }
  return out + "}";
}

std::string ClassificationRule::to_string() const {
  std::string out = "IF ";
  if (conditions.empty()) out += "true";
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    if (i) out += " AND ";
    out += conditions[i].to_string();
  }
  out += " THEN " + conclusion + " [" + std::to_string(support) + ", " + format_fixed(confidence) + "]";
  return out;
}

std::string ClassificationRule::canonical() const {
  std::vector<std::string> parts;
  for (const auto& c : conditions) {
    Condition normalized = c;
    for (auto& v : normalized.values) v = value_key(v);
    std::sort(normalized.values.begin(), normalized.values.end());
    normalized.attribute = value_key(normalized.attribute);
    parts.push_back(normalized.to_string());
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + " & ";
  return out + "-> " + value_key(conclusion);
}

std::vector<ClassificationRule> extract_rules(const DecisionNode& root) {
  std::vector<ClassificationRule> out;
  std::vector<Condition> path;
  walk(root, path, out);
  return out;
}

void write_rules(std::ostream& out, const std::vector<ClassificationRule>& rules) {
  for (const auto& r : rules) out << r.to_string() << "\n";
}

TreeMetrics tree_metrics(const DecisionNode& root) {
  TreeMetrics m;
  m.height = height(root);
  visit_metrics(root, m);
  m.rules = m.leaves;
  return m;
}

ComparisonReport compare_trees(const DecisionNode& a, const DecisionNode& b,
                               const std::vector<std::string>& requested) {
  ComparisonReport report;
  report.a = tree_metrics(a);
  report.b = tree_metrics(b);

  auto rules_a = extract_rules(a);
  auto rules_b = extract_rules(b);
  std::multiset<std::string> keys_a, keys_b;
  for (const auto& r : rules_a) keys_a.insert(r.canonical());
  for (const auto& r : rules_b) keys_b.insert(r.canonical());
  for (const auto& r : rules_a) {
    if (!keys_b.count(r.canonical())) report.only_in_a.push_back(r.to_string());
  }
  for (const auto& r : rules_b) {
    if (!keys_a.count(r.canonical())) report.only_in_b.push_back(r.to_string());
  }
  for (const auto& attr : requested) {
    report.requested.push_back({attr, uses(report.a, attr), uses(report.b, attr)});
  }
  return report;
}

void write_report(std::ostream& out, const ComparisonReport& report, const std::string& name_a,
                  const std::string& name_b) {
  auto row = [&](const char* label, std::size_t x, std::size_t y) {
    out << "  " << label << ": " << name_a << "=" << x << " " << name_b << "=" << y << "\n";
  };
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s.empty() ? std::string("-") : s;
  };
  out << "metrics:\n";
  row("height", report.a.height, report.b.height);
  row("internal nodes", report.a.internal_nodes, report.b.internal_nodes);
  row("leaves", report.a.leaves, report.b.leaves);
  row("rules", report.a.rules, report.b.rules);
  out << "  attributes used: " << name_a << "=" << join(report.a.attributes_used) << " "
      << name_b << "=" << join(report.b.attributes_used) << "\n";
  out << "requested attributes:\n";
  for (const auto& c : report.requested) {
    out << "  " << c.attribute << ": " << name_a << "=" << (c.covered_a ? "covered" : "pruned")
        << " " << name_b << "=" << (c.covered_b ? "covered" : "pruned") << "\n";
  }
  out << "rules only in " << name_a << ": " << report.only_in_a.size() << "\n";
  for (const auto& r : report.only_in_a) out << "  " << r << "\n";
  out << "rules only in " << name_b << ": " << report.only_in_b.size() << "\n";
  for (const auto& r : report.only_in_b) out << "  " << r << "\n";
}

}  // namespace entrotree
