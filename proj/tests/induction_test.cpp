#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "entrotree/induction.hpp"
#include "oracle.hpp"
#include "random_data.hpp"

namespace entrotree {
namespace {

const std::string kData = ENTROTREE_TEST_DATA;

Dataset table1() { return load_dataset_file(kData + "/table1.csv", kData + "/table1.schema"); }
Dataset table3() { return load_dataset_file(kData + "/table3.csv", kData + "/table3.schema"); }

InductionConfig priority_config(std::vector<PriorityAttribute> p) {
  InductionConfig cfg;
  cfg.mode = InductionMode::priority;
  cfg.priorities = std::move(p);
  return cfg;
}

bool tests_attribute(const DecisionNode& n, const std::string& attr) {
  if (n.is_leaf()) return false;
  if (n.attribute == attr) return true;
  return std::any_of(n.branches.begin(), n.branches.end(),
                     [&](const Branch& b) { return tests_attribute(b.child, attr); });
}

const DecisionNode& branch(const DecisionNode& n, const std::string& value) {
  for (const auto& b : n.branches) {
    if (std::find(b.values.begin(), b.values.end(), value) != b.values.end()) return b.child;
  }
  throw std::runtime_error("no branch " + value);
}

TEST(SelectSplit, BaselinePicksEducation) {
  auto d = table3();
  auto rows = all_rows(d);
  std::vector<std::size_t> remaining{0, 1};
  auto s = select_split(d, rows, remaining, InductionConfig{});
  ASSERT_TRUE(s);
  EXPECT_EQ(d.attribute(s->attribute).name, "avg_edu_level");
  EXPECT_FALSE(s->forced);
  EXPECT_NEAR(s->gain, testing::oracle_gain(d, 0), 1e-12);
  EXPECT_GT(s->gain, testing::oracle_gain(d, 1));
}

TEST(SelectSplit, PriorityPicksCountry) {
  auto d = table3();
  auto rows = all_rows(d);
  std::vector<std::size_t> remaining{0, 1};
  auto s = select_split(d, rows, remaining, priority_config({{"country", {}}}));
  ASSERT_TRUE(s);
  EXPECT_EQ(d.attribute(s->attribute).name, "country");
  EXPECT_TRUE(s->forced);
}

TEST(SelectSplit, EmptyRemaining) {
  auto d = table3();
  auto rows = all_rows(d);
  EXPECT_FALSE(select_split(d, rows, {}, InductionConfig{}));
}

TEST(BuildTree, PriorityCountryOnTableThree) {
  auto tree = build_tree(table3(), priority_config({{"country", {"India", "USA", "China", "Cuba"}}}));
  EXPECT_EQ(tree.attribute, "country");
  ASSERT_EQ(tree.branches.size(), 4u);
  std::vector<std::string> order;
  for (const auto& b : tree.branches) order.push_back(b.values.front());
  EXPECT_EQ(order, (std::vector<std::string>{"India", "USA", "China", "Cuba"}));
  const auto& cuba = branch(tree, "Cuba");
  ASSERT_TRUE(cuba.is_leaf());
  EXPECT_EQ(cuba.distribution.to_string(), "{Low:3}");
  const auto& usa = branch(tree, "USA");
  ASSERT_TRUE(usa.is_leaf());
  EXPECT_EQ(usa.distribution.count("Medium"), 2u);
  EXPECT_EQ(usa.distribution.count("High"), 3u);
}

TEST(BuildTree, BaselineNeverTestsCountry) {
  auto tree = build_tree(table3(), InductionConfig{});
  EXPECT_EQ(tree.attribute, "avg_edu_level");
  EXPECT_FALSE(tests_attribute(tree, "country"));
}

TEST(BuildTree, SingleTuple) {
  Dataset d(Schema{{"a", AttributeKind::nominal, AttributeRole::regular},
                   {"c", AttributeKind::nominal, AttributeRole::class_label}});
  d.append({std::string("x"), std::string("Yes")});
  auto tree = build_tree(d, InductionConfig{});
  ASSERT_TRUE(tree.is_leaf());
  EXPECT_EQ(tree.distribution.to_string(), "{Yes:1}");
}

TEST(BuildTree, EmptyDatasetRejected) {
  Dataset d(Schema{{"c", AttributeKind::nominal, AttributeRole::class_label}});
  EXPECT_THROW(build_tree(d, InductionConfig{}), Error);
}

TEST(BuildTree, KappaMakesLeaf) {
  Dataset d(Schema{{"a", AttributeKind::nominal, AttributeRole::regular},
                   {"c", AttributeKind::nominal, AttributeRole::class_label}});
  d.append({std::string("x"), std::string("A")}, 2);
  d.append({std::string("y"), std::string("A")});
  d.append({std::string("y"), std::string("B")}, 2);
  d.append({std::string("x"), std::string("A")});
  InductionConfig cfg;
  cfg.kappa = 0.5;
  cfg.min_objects = 1;
  // {A:4, B:2}: majority 0.67 >= 0.5.
  EXPECT_TRUE(build_tree(d, cfg).is_leaf());
  cfg.kappa = 1.0;
  EXPECT_FALSE(build_tree(d, cfg).is_leaf());
}

TEST(BuildTree, KappaThreeToOne) {
  Dataset d(Schema{{"a", AttributeKind::nominal, AttributeRole::regular},
                   {"c", AttributeKind::nominal, AttributeRole::class_label}});
  d.append({std::string("x"), std::string("A")}, 3);
  d.append({std::string("y"), std::string("B")}, 1);
  InductionConfig cfg;
  cfg.kappa = 0.5;
  cfg.min_objects = 1;
  EXPECT_TRUE(build_tree(d, cfg).is_leaf());
}

TEST(BuildTree, EpsilonStopsSmallSubsets) {
  Dataset d(Schema{{"a", AttributeKind::nominal, AttributeRole::regular},
                   {"b", AttributeKind::nominal, AttributeRole::regular},
                   {"c", AttributeKind::nominal, AttributeRole::class_label}});
  d.append({std::string("x"), std::string("p"), std::string("A")}, 4);
  d.append({std::string("x"), std::string("q"), std::string("B")}, 4);
  d.append({std::string("y"), std::string("p"), std::string("A")});
  d.append({std::string("y"), std::string("q"), std::string("B")});
  auto cfg = priority_config({{"a", {}}, {"b", {}}});
  auto loose = build_tree(d, cfg);
  EXPECT_FALSE(branch(loose, "y").is_leaf());
  cfg.epsilon = 0.3;
  auto tight = build_tree(d, cfg);
  EXPECT_TRUE(branch(tight, "y").is_leaf());
  EXPECT_FALSE(branch(tight, "x").is_leaf());
}

TEST(BuildTree, InvalidConfig) {
  InductionConfig cfg;
  cfg.kappa = 0;
  EXPECT_THROW(build_tree(table3(), cfg), Error);
  cfg = InductionConfig{};
  cfg.epsilon = 1.5;
  EXPECT_THROW(build_tree(table3(), cfg), Error);
  EXPECT_THROW(build_tree(table3(), priority_config({})), Error);
  EXPECT_THROW(build_tree(table3(), priority_config({{"nosuch", {}}})), Error);
  EXPECT_THROW(build_tree(table3(), priority_config({{"income_level", {}}})), Error);
}

TEST(BuildTree, UnlistedPriorityValuesAppendedInFirstSeenOrder) {
  auto tree = build_tree(table3(), priority_config({{"country", {"China"}}}));
  std::vector<std::string> order;
  for (const auto& b : tree.branches) order.push_back(b.values.front());
  EXPECT_EQ(order, (std::vector<std::string>{"China", "Cuba", "USA", "India"}));
}

TEST(SplitNumeric, PerfectSeparator) {
  Dataset d(Schema{{"x", AttributeKind::numeric, AttributeRole::regular},
                   {"c", AttributeKind::nominal, AttributeRole::class_label}});
  d.append({1.0, std::string("A")});
  d.append({3.0, std::string("B")});
  auto s = split_numeric(d, "x");
  EXPECT_DOUBLE_EQ(s.threshold, 2.0);
  EXPECT_NEAR(s.gain, 1.0, 1e-12);
}

TEST(SplitNumeric, ConstantColumnRejected) {
  Dataset d(Schema{{"x", AttributeKind::numeric, AttributeRole::regular},
                   {"c", AttributeKind::nominal, AttributeRole::class_label}});
  d.append({1.0, std::string("A")});
  d.append({1.0, std::string("B")});
  EXPECT_THROW(split_numeric(d, "x"), Error);
  EXPECT_THROW(split_numeric(table3(), "country"), Error);
}

TEST(SplitNumeric, TableOneIncomeMatchesEnumeration) {
  auto d = table1();
  auto x = d.attribute_index("family_income_per_year");
  auto cls = d.require_class();
  std::set<double> values;
  for (std::size_t r = 0; r < d.size(); ++r) values.insert(d.number(r, x));
  std::vector<double> sorted(values.begin(), values.end());
  double best_gain = -1;
  double best_t = 0;
  testing::Histogram all = testing::oracle_class_histogram(d);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    double t = (sorted[i] + sorted[i + 1]) / 2;
    testing::Histogram lo, hi;
    double nlo = 0, nhi = 0;
    for (std::size_t r = 0; r < d.size(); ++r) {
      auto& h = d.number(r, x) <= t ? lo : hi;
      (d.number(r, x) <= t ? nlo : nhi) += static_cast<double>(d.count(r));
      h[value_key(d.label(r, cls))] += d.count(r);
    }
    double n = nlo + nhi;
    double g = testing::oracle_entropy(all) - nlo / n * testing::oracle_entropy(lo) -
               nhi / n * testing::oracle_entropy(hi);
    if (g > best_gain + 1e-12) {
      best_gain = g;
      best_t = t;
    }
  }
  auto s = split_numeric(d, "family_income_per_year");
  EXPECT_DOUBLE_EQ(s.threshold, best_t);
  EXPECT_NEAR(s.gain, best_gain, 1e-12);
}

TEST(RollUp, RegionNodeBecomesCountries) {
  auto d = table1();
  auto h = std::make_shared<const ConceptHierarchy>(
      ConceptHierarchy::load_file(kData + "/region.hier"));
  auto cfg = priority_config({{"region", {}}});
  auto tree = build_tree(d, cfg);
  ASSERT_EQ(tree.attribute, "region");
  EXPECT_EQ(tree.branches.size(), 10u);
  auto up = rollup_node(tree, {}, h, d, cfg);
  std::set<std::string> countries;
  for (const auto& b : up.branches) countries.insert(b.values.front());
  EXPECT_EQ(countries, (std::set<std::string>{"USA", "Cuba", "India", "China"}));
  for (std::size_t r = 0; r < d.size(); ++r) {
    auto i = route(up, d, r);
    ASSERT_NE(i, static_cast<std::size_t>(-1));
    EXPECT_EQ(up.branches[i].values.front(), h->ascend(d.label(r, 1), 1));
  }
  auto down = drilldown_node(up, {}, h, d, cfg);
  EXPECT_EQ(down, tree);
}

TEST(RollUp, TopLevelLeavesTreeUnchanged) {
  auto d = table3();
  auto h = std::make_shared<const ConceptHierarchy>(
      ConceptHierarchy::parse("attribute: country\nlevels: Only\nUSA\nCuba\nIndia\nChina\n"));
  auto cfg = priority_config({{"country", {}}});
  auto tree = build_tree(d, cfg);
  EXPECT_EQ(rollup_node(tree, {}, h, d, cfg), tree);
}

TEST(RollUp, Errors) {
  auto d = table3();
  auto tree = build_tree(d, priority_config({{"country", {}}}));
  auto other = std::make_shared<const ConceptHierarchy>(
      ConceptHierarchy::parse("attribute: x\nlevels: L0, L1\np -> top\nq -> top\n"));
  EXPECT_THROW(rollup_node(tree, {}, other, d, InductionConfig{}), Error);
  auto region = std::make_shared<const ConceptHierarchy>(
      ConceptHierarchy::load_file(kData + "/region.hier"));
  EXPECT_THROW(rollup_node(tree, {3}, region, d, InductionConfig{}), Error);
  EXPECT_THROW(drilldown_node(tree, {}, region, d, InductionConfig{}), Error);
}

void check_invariants(const DecisionNode& n, const Dataset& d, std::vector<std::size_t> rows,
                      std::set<std::string> used) {
  EXPECT_EQ(class_distribution(d, rows), n.distribution);
  if (n.is_leaf()) {
    EXPECT_GT(n.distribution.total(), 0u);
    return;
  }
  EXPECT_TRUE(used.insert(n.attribute).second) << "attribute tested twice: " << n.attribute;
  ClassDistribution sum(n.distribution.labels());
  std::set<std::string> values;
  for (const auto& b : n.branches) {
    for (const auto& v : b.values) EXPECT_TRUE(values.insert(value_key(v)).second);
    std::vector<std::size_t> part;
    for (auto r : rows) {
      if (b.matches(n, d, r)) part.push_back(r);
    }
    sum += b.child.distribution;
    check_invariants(b.child, d, part, used);
  }
  EXPECT_EQ(sum, n.distribution);
}

TEST(InductionProperty, StructuralInvariants) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    auto d = testing::random_dataset(rng, {.max_count = 2});
    InductionConfig cfg;
    cfg.min_objects = 1 + i % 3;
    auto tree = build_tree(d, cfg);
    check_invariants(tree, d, all_rows(d), {});
    for (std::size_t r = 0; r < d.size(); ++r) {
      EXPECT_GT(classify(tree, d, r).count(d.label(r, d.require_class())), 0u);
    }

    auto p = "a" + std::to_string(i % (d.attribute_count() - 1));
    auto ptree = build_tree(d, priority_config({{p, {}}}));
    check_invariants(ptree, d, all_rows(d), {});
    std::set<std::string> observed;
    for (std::size_t r = 0; r < d.size(); ++r) observed.insert(d.label(r, d.attribute_index(p)));
    if (observed.size() >= 2) EXPECT_EQ(ptree.attribute, p);
  }
}

}  // namespace
}  // namespace entrotree
