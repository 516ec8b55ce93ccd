#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entrotree/dataset.hpp"

namespace entrotree {

// Expected information (class entropy) in bits: -sum (c/p) log2 (c/p).
// Zero counts contribute nothing. Throws when every count is zero.
double expected_info(std::span<const std::uint64_t> counts);
double expected_info(const ClassDistribution& dist);

// Count-weighted average class entropy over the partition induced by the
// distinct values of `attr` (numeric attributes partition by exact value).
double attribute_expected_info(const Dataset& d, std::size_t attr,
                               std::span<const std::size_t> rows);
double attribute_expected_info(const Dataset& d, std::string_view attr);

double info_gain(const Dataset& d, std::size_t attr, std::span<const std::size_t> rows);
double info_gain(const Dataset& d, std::string_view attr);

// Gain normalized by class entropy; 0 when the class entropy is 0.
double uncertainty_coefficient(const Dataset& d, std::size_t attr,
                               std::span<const std::size_t> rows);
double uncertainty_coefficient(const Dataset& d, std::string_view attr);

struct AttributeScore {
  std::string attribute;
  double expected_info = 0;
  double gain = 0;
  double uncertainty = 0;
};

// One score per non-class attribute, in schema order.
std::vector<AttributeScore> score_attributes(const Dataset& d);

struct RelevancePolicy {
  enum class Kind { top_n, threshold };
  Kind kind = Kind::threshold;
  std::size_t n = 0;
  double tau = 0;

  static RelevancePolicy top(std::size_t n) { return {Kind::top_n, n, 0}; }
  static RelevancePolicy at_least(double tau) { return {Kind::threshold, 0, tau}; }
};

// Attributes ranked by descending U (ties: schema order) that satisfy the
// policy, plus every protected attribute regardless of its score.
std::vector<std::string> relevance_filter(const Dataset& d, const RelevancePolicy& policy,
                                          std::span<const std::string> protected_attrs = {});

}  // namespace entrotree
