#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "entrotree/concept_hierarchy.hpp"
#include "entrotree/dataset.hpp"
#include "entrotree/dmql.hpp"
#include "entrotree/entropy.hpp"
#include "entrotree/induction.hpp"
#include "entrotree/render.hpp"
#include "entrotree/restructure.hpp"
#include "entrotree/rules.hpp"

namespace entrotree::cli {

namespace fs = std::filesystem;

namespace {

struct DataOptions {
  std::string data;
  std::string schema;
  std::string class_name;
};

struct TreeOptions {
  std::string mode = "baseline";
  std::vector<std::string> priority;
  double epsilon = 0.0;
  double kappa = 1.0;
  std::size_t min_objects = 2;
  bool merge = false;
  bool balance = false;
  std::optional<std::size_t> checkpoint;
  std::string style = "ascii";
};

struct QueryOptions {
  std::string query;
  std::string data;
  std::string schema;
  std::string name;
  std::vector<std::string> hierarchies;
  double epsilon = 0.0;
  double kappa = 1.0;
  std::size_t min_objects = 2;
  bool merge = true;
  bool balance = true;
  std::optional<std::size_t> checkpoint;
  std::optional<std::size_t> top_n;
  std::optional<double> min_u;
  std::string style = "ascii";
};

struct GeneralizeOptions {
  std::string data;
  std::string schema;
  std::vector<std::string> hierarchies;
  std::optional<std::size_t> threshold;
  std::vector<std::string> attribute_thresholds;
  std::vector<std::string> aggregates;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path schema_for(const std::string& data, const std::string& schema) {
  if (!schema.empty()) return schema;
  fs::path p = data;
  p.replace_extension(".schema");
  if (!fs::exists(p)) {
    throw Error("no schema given for '" + data + "' and '" + p.string() + "' does not exist");
  }
  return p;
}

Dataset load(const std::string& data, const std::string& schema) {
  if (!fs::exists(data)) throw Error("data file '" + data + "' not found");
  return load_dataset_file(data, schema_for(data, schema));
}

Dataset load_with_class(const std::string& data, const std::string& schema,
                        const std::string& class_name) {
  Dataset d = load(data, schema);
  if (!class_name.empty()) {
    if (!d.find_attribute(class_name)) {
      throw Error("unknown class attribute '" + class_name + "'");
    }
    d = with_class(d, class_name);
  }
  d.require_class();
  return d;
}

TreeStyle parse_style(const std::string& s) {
  if (s == "ascii") return TreeStyle::ascii;
  if (s == "indented") return TreeStyle::indented;
  throw Error("unknown style '" + s + "' (expected ascii or indented)");
}

std::vector<ConceptHierarchy> load_hierarchies(const std::vector<std::string>& paths) {
  std::vector<ConceptHierarchy> out;
  for (const auto& p : paths) {
    if (!fs::exists(p)) throw Error("hierarchy file '" + p + "' not found");
    out.push_back(ConceptHierarchy::load_file(p));
  }
  return out;
}

// Every <name>.csv with a sibling <name>.schema is a dataset; every *.hier
// file is registered with all of them.
void load_catalog_dir(const fs::path& dir, dmql::Catalog& catalog) {
  if (!fs::is_directory(dir)) throw Error("catalog directory '" + dir.string() + "' not found");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<ConceptHierarchy> hierarchies;
  for (const auto& f : files) {
    if (f.extension() == ".hier") hierarchies.push_back(ConceptHierarchy::load_file(f));
  }
  for (const auto& f : files) {
    if (f.extension() != ".csv") continue;
    auto schema = fs::path(f).replace_extension(".schema");
    if (!fs::exists(schema)) continue;
    catalog[f.stem().string()] = {load_dataset_file(f, schema), hierarchies};
  }
}

void write_lines(std::ostream& out, const std::vector<std::string>& lines,
                 const std::string& prefix = "") {
  for (const auto& l : lines) out << prefix << l << "\n";
}

void write_tree_and_rules(std::ostream& out, const DecisionNode& tree, TreeStyle style,
                          const std::vector<ClassificationRule>& rules) {
  out << "tree:\n";
  write_tree(out, tree, style);
  out << "rules:\n";
  write_rules(out, rules);
}

InductionConfig induction_config(const TreeOptions& o, const Dataset& d) {
  InductionConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.kappa = o.kappa;
  cfg.min_objects = o.min_objects;
  if (o.mode == "priority") {
    cfg.mode = InductionMode::priority;
    if (o.priority.empty()) throw Error("--mode priority requires --priority");
  } else if (o.mode != "baseline") {
    throw Error("unknown mode '" + o.mode + "' (expected baseline or priority)");
  }
  for (const auto& p : o.priority) {
    if (!d.find_attribute(p)) throw Error("unknown priority attribute '" + p + "'");
    cfg.priorities.push_back({d.attribute(d.attribute_index(p)).name, {}});
  }
  cfg.validate();
  return cfg;
}

DecisionNode induce_tree(const Dataset& d, const TreeOptions& o, const InductionConfig& cfg) {
  if (cfg.mode == InductionMode::priority) {
    auto pa = PriorityAssignment::from(cfg);
    if (o.checkpoint) pa = PriorityAssignment(pa.ordered(), *o.checkpoint);
    DecisionNode tree = height_balance_priority(d, pa, cfg);
    if (o.merge) tree = node_merge(tree, pa);
    if (o.balance) tree = height_balance(tree);
    return tree;
  }
  DecisionNode tree = build_tree(d, cfg);
  if (o.merge) tree = node_merge(tree, PriorityAssignment{});
  if (o.balance) tree = height_balance(tree);
  return tree;
}

void add_data_options(CLI::App* cmd, DataOptions& o, bool with_class) {
  cmd->add_option("--data", o.data, "CSV data file")->required();
  cmd->add_option("--schema", o.schema, "schema file (default: data path with .schema)");
  if (with_class) cmd->add_option("--class", o.class_name, "class attribute");
}

void add_tree_options(CLI::App* cmd, TreeOptions& o) {
  cmd->add_option("--mode", o.mode, "baseline or priority");
  cmd->add_option("--priority", o.priority, "priority attributes in rank order")->delimiter(',');
  cmd->add_option("--epsilon", o.epsilon, "exception threshold");
  cmd->add_option("--kappa", o.kappa, "classification threshold");
  cmd->add_option("--min-objects", o.min_objects, "minimum weight of two branches");
  cmd->add_flag("--merge,!--no-merge", o.merge, "run node merge");
  cmd->add_flag("--balance,!--no-balance", o.balance, "run height balance");
  cmd->add_option("--checkpoint", o.checkpoint, "highest rank protected from merging");
  cmd->add_option("--style", o.style, "ascii or indented");
}

int cmd_induce(const DataOptions& data, const TreeOptions& o, std::ostream& out) {
  Dataset d = load_with_class(data.data, data.schema, data.class_name);
  auto style = parse_style(o.style);
  auto cfg = induction_config(o, d);
  auto tree = induce_tree(d, o, cfg);
  write_tree_and_rules(out, tree, style, extract_rules(tree));
  return 0;
}

int cmd_compare(const DataOptions& data, TreeOptions o, std::ostream& out) {
  Dataset d = load_with_class(data.data, data.schema, data.class_name);
  if (o.priority.empty()) throw Error("compare requires --priority");
  auto style = parse_style(o.style);
  TreeOptions base = o;
  base.mode = "baseline";
  o.mode = "priority";
  auto baseline = induce_tree(d, base, induction_config(base, d));
  auto priority = induce_tree(d, o, induction_config(o, d));
  out << "baseline ";
  write_tree_and_rules(out, baseline, style, extract_rules(baseline));
  out << "priority ";
  write_tree_and_rules(out, priority, style, extract_rules(priority));
  write_report(out, compare_trees(baseline, priority, o.priority));
  return 0;
}

int cmd_score(const DataOptions& data, std::ostream& out) {
  write_scores(out, load_with_class(data.data, data.schema, data.class_name));
  return 0;
}

std::pair<std::string, std::string> split_pair(const std::string& s, const std::string& flag) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
    throw Error(flag + " expects attr=value, got '" + s + "'");
  }
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

int cmd_generalize(const GeneralizeOptions& o, std::ostream& out) {
  Dataset d = load(o.data, o.schema);
  auto hierarchies = load_hierarchies(o.hierarchies);
  AoiConfig cfg;
  cfg.default_threshold = o.threshold;
  for (const auto& t : o.attribute_thresholds) {
    auto [attr, value] = split_pair(t, "--attribute-threshold");
    d.attribute_index(attr);
    auto n = parse_number(value);
    if (!n || *n < 1 || *n != static_cast<double>(static_cast<std::size_t>(*n))) {
      throw Error("threshold for '" + attr + "' must be a positive integer");
    }
    cfg.thresholds[attr] = static_cast<std::size_t>(*n);
  }
  for (const auto& a : o.aggregates) {
    auto [attr, how] = split_pair(a, "--aggregate");
    d.attribute_index(attr);
    if (names_equal(how, "sum")) {
      cfg.aggregates[attr] = Aggregate::sum;
    } else if (names_equal(how, "none")) {
      cfg.aggregates[attr] = Aggregate::none;
    } else {
      throw Error("unknown aggregate '" + how + "' (expected sum or none)");
    }
  }
  write_dataset(out, aoi(d, hierarchies, cfg));
  return 0;
}

int cmd_query(const QueryOptions& o, std::ostream& out, std::ostream& err) {
  std::string text = o.query;
  if (fs::is_regular_file(o.query)) text = read_file(o.query);
  auto q = dmql::parse(text);

  dmql::Catalog catalog;
  if (const char* dir = std::getenv("ENTROTREE_CATALOG"); dir && *dir) {
    load_catalog_dir(dir, catalog);
  }
  auto hierarchies = load_hierarchies(o.hierarchies);
  if (!o.data.empty()) {
    Dataset d = load(o.data, o.schema);
    std::string name = o.name.empty() ? q.source_dataset : o.name;
    catalog[name] = {std::move(d), hierarchies};
  } else if (!hierarchies.empty()) {
    for (auto& [name, entry] : catalog) {
      entry.hierarchies.insert(entry.hierarchies.end(), hierarchies.begin(), hierarchies.end());
    }
  }

  auto style = parse_style(o.style);
  dmql::ExecuteOptions options;
  options.induction.epsilon = o.epsilon;
  options.induction.kappa = o.kappa;
  options.induction.min_objects = o.min_objects;
  options.merge = o.merge;
  options.balance = o.balance;
  options.checkpoint = o.checkpoint;
  if (o.top_n && o.min_u) throw Error("--top-n and --min-u are mutually exclusive");
  if (o.top_n) options.relevance = RelevancePolicy::top(*o.top_n);
  if (o.min_u) options.relevance = RelevancePolicy::at_least(*o.min_u);

  auto result = dmql::execute(q, catalog, options);
  write_lines(err, result.warnings, "warning: ");
  if (result.task == dmql::Task::generalize) {
    write_dataset(out, *result.generalized, result.count_column);
    return 0;
  }
  write_tree_and_rules(out, *result.tree, style, result.rules);
  write_report(out, *result.report);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Priority-based decision tree induction over generalized data", "entrotree"};
  app.require_subcommand(1);

  QueryOptions query;
  auto* q = app.add_subcommand("query", "run a DMQL query (text or file)");
  q->add_option("query", query.query, "query text or path to a query file")->required();
  q->add_option("--data", query.data, "CSV data file registered under the query's dataset name");
  q->add_option("--schema", query.schema, "schema file (default: data path with .schema)");
  q->add_option("--name", query.name, "catalog name for --data");
  q->add_option("--hierarchy", query.hierarchies, "concept hierarchy file (repeatable)");
  q->add_option("--epsilon", query.epsilon, "exception threshold");
  q->add_option("--kappa", query.kappa, "classification threshold");
  q->add_option("--min-objects", query.min_objects, "minimum weight of two branches");
  q->add_flag("--merge,!--no-merge", query.merge, "run node merge (default on)");
  q->add_flag("--balance,!--no-balance", query.balance, "run height balance (default on)");
  q->add_option("--checkpoint", query.checkpoint, "highest rank protected from merging");
  q->add_option("--top-n", query.top_n, "keep the n most relevant attributes");
  q->add_option("--min-u", query.min_u, "keep attributes with U at least this value");
  q->add_option("--style", query.style, "ascii or indented");

  DataOptions induce_data;
  TreeOptions induce_tree_opts;
  auto* ind = app.add_subcommand("induce", "build a decision tree and print its rules");
  add_data_options(ind, induce_data, true);
  add_tree_options(ind, induce_tree_opts);

  DataOptions score_data;
  auto* sc = app.add_subcommand("score", "print I, E, Gain and U per attribute");
  add_data_options(sc, score_data, true);

  GeneralizeOptions gen;
  auto* g = app.add_subcommand("generalize", "attribute-oriented induction");
  g->add_option("--data", gen.data, "CSV data file")->required();
  g->add_option("--schema", gen.schema, "schema file (default: data path with .schema)");
  g->add_option("--hierarchy", gen.hierarchies, "concept hierarchy file (repeatable)");
  g->add_option("--threshold", gen.threshold, "default generalization threshold");
  g->add_option("--attribute-threshold", gen.attribute_thresholds, "attr=n (repeatable)");
  g->add_option("--aggregate", gen.aggregates, "attr=sum|none (repeatable)");

  DataOptions compare_data;
  TreeOptions compare_opts;
  auto* cmp = app.add_subcommand("compare", "baseline versus priority tree report");
  add_data_options(cmp, compare_data, true);
  add_tree_options(cmp, compare_opts);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << "\n";
    return 2;
  }

  try {
    if (q->parsed()) return cmd_query(query, out, err);
    if (ind->parsed()) return cmd_induce(induce_data, induce_tree_opts, out);
    if (sc->parsed()) return cmd_score(score_data, out);
    if (g->parsed()) return cmd_generalize(gen, out);
    if (cmp->parsed()) return cmd_compare(compare_data, compare_opts, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << "\n";
    return 1;
  }
  return 1;
}

}  // namespace entrotree::cli
