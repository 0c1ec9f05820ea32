#include "depforge/gain_ratio.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

namespace depforge {

double entropy(std::span<const double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

SplitStats split_stats(std::span<const Instance> instances, std::span<const std::uint32_t> rows,
                       std::size_t feature, std::size_t num_classes) {
  SplitStats stats;
  if (rows.empty()) return stats;

  std::vector<double> class_counts(num_classes, 0.0);
  std::unordered_map<SymbolId, std::vector<double>> by_value;
  for (std::uint32_t r : rows) {
    const auto& inst = instances[r];
    class_counts[inst.label] += 1.0;
    auto& counts = by_value[inst.values[feature]];
    if (counts.empty()) counts.assign(num_classes, 0.0);
    counts[inst.label] += 1.0;
  }

  const double n = static_cast<double>(rows.size());
  double conditional = 0.0;
  std::vector<double> value_sizes;
  value_sizes.reserve(by_value.size());
  for (const auto& [value, counts] : by_value) {
    const double nv = std::accumulate(counts.begin(), counts.end(), 0.0);
    conditional += (nv / n) * entropy(counts);
    value_sizes.push_back(nv);
  }
  stats.gain = entropy(class_counts) - conditional;
  stats.split_info = entropy(value_sizes);
  stats.ratio = stats.split_info > 0.0 ? stats.gain / stats.split_info : 0.0;
  return stats;
}

std::vector<double> gain_ratio_weights(std::span<const Instance> instances,
                                       std::size_t num_classes) {
  std::vector<std::uint32_t> rows(instances.size());
  std::iota(rows.begin(), rows.end(), 0U);
  const std::size_t features = instances.empty() ? 0 : instances.front().values.size();
  std::vector<double> weights(features, 0.0);
  for (std::size_t t = 0; t < features; ++t) {
    // gain can come out as -1e-17 on constant templates
    weights[t] = std::max(0.0, split_stats(instances, rows, t, num_classes).ratio);
  }
  return weights;
}

}  // namespace depforge
