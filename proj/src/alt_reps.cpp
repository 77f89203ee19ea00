#include "mind/alt_reps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mind/pointset.hpp"

namespace mind {

FeatureTable minimax_rep(const MilDataset& bags) {
  require_valid(bags);
  const std::size_t d = bags.dim;
  FeatureTable table;
  for (std::size_t k = 0; k < d; ++k) table.columns.push_back("min:f" + std::to_string(k));
  for (std::size_t k = 0; k < d; ++k) table.columns.push_back("max:f" + std::to_string(k));
  table.values.resize(static_cast<Eigen::Index>(bags.size()), static_cast<Eigen::Index>(2 * d));

  for (std::size_t i = 0; i < bags.size(); ++i) {
    const Bag& bag = bags.bags[i];
    table.row_ids.push_back(bag.id);
    table.labels.push_back(bag.label);
    for (std::size_t k = 0; k < d; ++k) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (const Instance& x : bag.instances) {
        lo = std::min(lo, x[k]);
        hi = std::max(hi, x[k]);
      }
      const auto row = static_cast<Eigen::Index>(i);
      table.values(row, static_cast<Eigen::Index>(k)) = lo;
      table.values(row, static_cast<Eigen::Index>(d + k)) = hi;
    }
  }
  return table;
}

FeatureTable miles_rep(const MilDataset& bags, const std::vector<Instance>& reference,
                       const MilesParams& params,
                       const std::vector<std::string>& instance_names) {
  require_valid(bags);
  if (!(params.sigma > 0.0)) throw Error("miles: sigma must be positive");
  if (!instance_names.empty() && instance_names.size() != reference.size()) {
    throw Error("miles: instance name count does not match reference instances");
  }
  const double sigma2 = params.sigma * params.sigma;

  FeatureTable table;
  for (std::size_t j = 0; j < reference.size(); ++j) {
    table.columns.push_back("miles:" +
                            (instance_names.empty() ? std::to_string(j) : instance_names[j]));
  }
  table.values.resize(static_cast<Eigen::Index>(bags.size()),
                      static_cast<Eigen::Index>(reference.size()));
  for (std::size_t i = 0; i < bags.size(); ++i) {
    const Bag& bag = bags.bags[i];
    table.row_ids.push_back(bag.id);
    table.labels.push_back(bag.label);
    for (std::size_t j = 0; j < reference.size(); ++j) {
      // max of exp(-d / s^2) is attained at the nearest instance
      double nearest = std::numeric_limits<double>::infinity();
      for (const Instance& x : bag.instances) nearest = std::min(nearest, sq_euclidean(x, reference[j]));
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::exp(-nearest / sigma2);
    }
  }
  return table;
}

std::vector<Instance> collect_instances(const MilDataset& training, std::vector<std::string>* names) {
  std::vector<Instance> out;
  for (const Bag& bag : training.bags) {
    for (std::size_t k = 0; k < bag.instances.size(); ++k) {
      out.push_back(bag.instances[k]);
      if (names) names->push_back(bag.id + "#" + std::to_string(k));
    }
  }
  return out;
}

}  // namespace mind
