#include "entrotree/render.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "entrotree/rules.hpp"

namespace entrotree {

namespace {

std::string branch_label(const DecisionNode& parent, const Branch& b) {
  Condition c;
  c.attribute = parent.attribute;
  if (parent.kind == AttributeKind::numeric) {
    c.op = b.side == Side::at_most ? Condition::Op::at_most : Condition::Op::greater;
    c.threshold = parent.threshold;
  } else {
    c.values = b.values;
  }
  return c.to_string() + " ->";
}

std::string node_label(const DecisionNode& n) {
  return n.is_leaf() ? n.distribution.to_string() : "[" + n.attribute + "]";
}

void ascii(const DecisionNode& node, const std::string& indent, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < node.branches.size(); ++i) {
    const auto& b = node.branches[i];
    bool last = i + 1 == node.branches.size();
    out.push_back(indent + (last ? "`-- " : "|-- ") + branch_label(node, b) + " " +
                  node_label(b.child));
    ascii(b.child, indent + (last ? "    " : "|   "), out);
  }
}

void indented(const DecisionNode& node, const std::string& indent,
              std::vector<std::string>& out) {
  out.push_back(indent + node_label(node));
  for (const auto& b : node.branches) {
    out.push_back(indent + "  " + branch_label(node, b));
    indented(b.child, indent + "    ", out);
  }
}

}  // namespace

std::vector<std::string> render_tree(const DecisionNode& root, TreeStyle style) {
  std::vector<std::string> out;
  if (style == TreeStyle::indented) {
    indented(root, "", out);
  } else {
    out.push_back(node_label(root));
    ascii(root, "", out);
  }
  return out;
}

void write_tree(std::ostream& out, const DecisionNode& root, TreeStyle style) {
  for (const auto& line : render_tree(root, style)) out << line << "\n";
}

std::string format_fixed(double v) {
  if (std::abs(v) < 5e-13) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

void write_scores(std::ostream& out, const Dataset& d) {
  auto dist = class_distribution(d);
  out << "class " << d.attribute(d.require_class()).name << " " << dist.to_string()
      << " I=" << format_fixed(expected_info(dist)) << "\n";
  out << "attribute,E,Gain,U\n";
  for (const auto& s : score_attributes(d)) {
    out << s.attribute << "," << format_fixed(s.expected_info) << "," << format_fixed(s.gain)
        << "," << format_fixed(s.uncertainty) << "\n";
  }
}

}  // namespace entrotree
