#include "entrotree/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace entrotree {

double expected_info(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw Error("expected information of an all-zero distribution");
  const double p = static_cast<double>(total);
  double info = 0;
  for (auto c : counts) {
    if (c == 0) continue;
    double f = static_cast<double>(c) / p;
    info -= f * std::log2(f);
  }
  return info;
}

double expected_info(const ClassDistribution& dist) { return expected_info(dist.counts()); }

double attribute_expected_info(const Dataset& d, std::size_t attr,
                               std::span<const std::size_t> rows) {
  auto cls = d.require_class();
  if (attr == cls) throw Error("attribute '" + d.attribute(attr).name + "' is the class");
  const auto num_classes = d.labels(cls).size();

  // Partition histograms keyed by code (nominal) or value (numeric).
  std::map<double, std::vector<std::uint64_t>> parts;
  const bool numeric = d.attribute(attr).kind == AttributeKind::numeric;
  std::uint64_t total = 0;
  for (auto r : rows) {
    double key = numeric ? d.number(r, attr) : static_cast<double>(d.code(r, attr));
    auto& hist = parts[key];
    if (hist.empty()) hist.assign(num_classes, 0);
    hist[d.code(r, cls)] += d.count(r);
    total += d.count(r);
  }
  if (total == 0) throw Error("expected information over an empty row set");

  double e = 0;
  for (const auto& [key, hist] : parts) {
    auto n = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
    e += static_cast<double>(n) / static_cast<double>(total) * expected_info(hist);
  }
  return e;
}

double attribute_expected_info(const Dataset& d, std::string_view attr) {
  return attribute_expected_info(d, d.attribute_index(attr), all_rows(d));
}

double info_gain(const Dataset& d, std::size_t attr, std::span<const std::size_t> rows) {
  double e = attribute_expected_info(d, attr, rows);
  return expected_info(class_distribution(d, rows)) - e;
}

double info_gain(const Dataset& d, std::string_view attr) {
  return info_gain(d, d.attribute_index(attr), all_rows(d));
}

double uncertainty_coefficient(const Dataset& d, std::size_t attr,
                               std::span<const std::size_t> rows) {
  double i = expected_info(class_distribution(d, rows));
  if (i == 0) return 0;
  double u = (i - attribute_expected_info(d, attr, rows)) / i;
  return std::clamp(u, 0.0, 1.0);
}

double uncertainty_coefficient(const Dataset& d, std::string_view attr) {
  return uncertainty_coefficient(d, d.attribute_index(attr), all_rows(d));
}

std::vector<AttributeScore> score_attributes(const Dataset& d) {
  auto cls = d.require_class();
  auto rows = all_rows(d);
  double i = expected_info(class_distribution(d, rows));
  std::vector<AttributeScore> scores;
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    if (a == cls) continue;
    AttributeScore s;
    s.attribute = d.attribute(a).name;
    s.expected_info = attribute_expected_info(d, a, rows);
    s.gain = i - s.expected_info;
    s.uncertainty = i == 0 ? 0.0 : std::clamp(s.gain / i, 0.0, 1.0);
    scores.push_back(std::move(s));
  }
  return scores;
}

std::vector<std::string> relevance_filter(const Dataset& d, const RelevancePolicy& policy,
                                          std::span<const std::string> protected_attrs) {
  for (const auto& p : protected_attrs) d.attribute_index(p);
  auto scores = score_attributes(d);
  std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    return a.uncertainty > b.uncertainty;
  });
  auto is_protected = [&](const std::string& name) {
    return std::any_of(protected_attrs.begin(), protected_attrs.end(),
                       [&](const auto& p) { return names_equal(p, name); });
  };
  std::vector<std::string> out;
  for (std::size_t rank = 0; rank < scores.size(); ++rank) {
    const auto& s = scores[rank];
    bool selected = policy.kind == RelevancePolicy::Kind::top_n ? rank < policy.n
                                                                : s.uncertainty >= policy.tau;
    if (selected || is_protected(s.attribute)) out.push_back(s.attribute);
  }
  return out;
}

}  // namespace entrotree
