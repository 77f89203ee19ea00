#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "mind/bag.hpp"

namespace mind {

struct GenConfig {
  std::size_t bags_per_class = 50;
  std::size_t instances_per_bag = 10;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
};

/// Background N(0, 2^2 I) everywhere; each positive bag swaps one instance,
/// at a random position, for a draw from the dense concept N(0, 0.1^2 I).
MilDataset gen_concept(const GenConfig& config);

/// Positive instances ~ N((+0.5, 0, ...), I), negative ~ N((-0.5, 0, ...), I).
MilDataset gen_distribution(const GenConfig& config);

/// Background N(0, I); each positive bag swaps one instance for an outlier
/// in a uniformly random direction at radius uniform in [4, 6].
MilDataset gen_multiconcept(const GenConfig& config);

enum class Problem { kConcept, kDistribution, kMultiConcept };

std::optional<Problem> parse_problem(std::string_view name);
std::string_view to_string(Problem problem);
MilDataset generate(Problem problem, const GenConfig& config);

}  // namespace mind
