#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "entrotree/dataset.hpp"

namespace entrotree::testing {

// Histogram of class label -> weight.
using Histogram = std::map<std::string, std::uint64_t>;

// I = log2(p) - (1/p) * sum c*log2(c); algebraically equal to the textbook
// form but evaluated along a different path.
inline double oracle_entropy(const Histogram& h) {
  double p = 0;
  double acc = 0;
  std::size_t present = 0;
  for (const auto& [label, c] : h) {
    if (c == 0) continue;
    ++present;
    p += static_cast<double>(c);
    acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  }
  if (present < 2) return 0;
  return std::log2(p) - acc / p;
}

inline Histogram oracle_class_histogram(const Dataset& d) {
  Histogram h;
  const auto cls = *d.class_index();
  for (std::size_t r = 0; r < d.size(); ++r) h[value_key(d.label(r, cls))] += d.count(r);
  return h;
}

inline std::map<std::string, Histogram> oracle_partition(const Dataset& d, std::size_t attr) {
  std::map<std::string, Histogram> parts;
  const auto cls = *d.class_index();
  for (std::size_t r = 0; r < d.size(); ++r) {
    parts[value_key(d.label(r, attr))][value_key(d.label(r, cls))] += d.count(r);
  }
  return parts;
}

inline double oracle_expected_info(const Dataset& d, std::size_t attr) {
  double total = 0;
  double weighted = 0;
  for (const auto& [value, h] : oracle_partition(d, attr)) {
    double n = 0;
    for (const auto& [label, c] : h) n += static_cast<double>(c);
    total += n;
    weighted += n * oracle_entropy(h);
  }
  return weighted / total;
}

inline double oracle_gain(const Dataset& d, std::size_t attr) {
  return oracle_entropy(oracle_class_histogram(d)) - oracle_expected_info(d, attr);
}

inline double oracle_uncertainty(const Dataset& d, std::size_t attr) {
  double i = oracle_entropy(oracle_class_histogram(d));
  if (i == 0) return 0;
  return oracle_gain(d, attr) / i;
}

}  // namespace entrotree::testing
