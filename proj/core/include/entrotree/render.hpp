#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "entrotree/dataset.hpp"
#include "entrotree/entropy.hpp"
#include "entrotree/tree.hpp"

namespace entrotree {

enum class TreeStyle { ascii, indented };

// Test nodes render as [attr], branches as "attr=value ->", leaves as
// {class:count, ...}. Output is deterministic for a given tree and style.
std::vector<std::string> render_tree(const DecisionNode& root, TreeStyle style = TreeStyle::ascii);
void write_tree(std::ostream& out, const DecisionNode& root, TreeStyle style = TreeStyle::ascii);

// "%.12f"
std::string format_fixed(double v);

// Class entropy followed by one line per attribute with E, Gain and U.
void write_scores(std::ostream& out, const Dataset& d);

}  // namespace entrotree
