#pragma once

#include <vector>

#include "mind/bag.hpp"
#include "mind/dissim_space.hpp"

namespace mind {

/// Per-feature minima over the bag's instances followed by per-feature
/// maxima: 2 * dim columns.
FeatureTable minimax_rep(const MilDataset& bags);

struct MilesParams {
  double sigma = 10.0;
};

/// One column per reference instance t_j:
///   feature_j(B) = max over x in B of exp(-||x - t_j||^2 / sigma^2).
/// `instance_names` labels the columns and may be empty.
FeatureTable miles_rep(const MilDataset& bags, const std::vector<Instance>& reference,
                       const MilesParams& params,
                       const std::vector<std::string>& instance_names = {});

/// All instances of `training` in bag order, with names "<bag-id>#<k>".
std::vector<Instance> collect_instances(const MilDataset& training,
                                        std::vector<std::string>* names = nullptr);

}  // namespace mind
