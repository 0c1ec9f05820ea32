#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "depforge/features.hpp"

namespace depforge {

struct SplitStats {
  double gain = 0.0;        // information gain, bits
  double split_info = 0.0;  // entropy of the value distribution, bits
  double ratio = 0.0;       // gain / split_info, 0 when split_info is 0
};

/// Shannon entropy (bits) of a count vector.
double entropy(std::span<const double> counts);

/// Gain-ratio statistics of splitting `rows` (indices into `instances`) on
/// one template. Values are compared by equality only.
SplitStats split_stats(std::span<const Instance> instances, std::span<const std::uint32_t> rows,
                       std::size_t feature, std::size_t num_classes);

/// Gain ratio of every template over the full set; used as k-NN weights.
std::vector<double> gain_ratio_weights(std::span<const Instance> instances,
                                       std::size_t num_classes);

}  // namespace depforge
