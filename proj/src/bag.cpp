#include "mind/bag.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace mind {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::positive:
      return "positive";
    case Label::negative:
      return "negative";
    case Label::unknown:
      break;
  }
  return "unknown";
}

ValidationResult validate_dataset(const MilDataset& dataset) {
  ValidationResult result;
  auto add = [&result](const std::string& id, std::string_view rule) {
    result.violations.push_back({id, std::string(rule)});
  };

  if (dataset.dim == 0 && !dataset.bags.empty()) add("", kZeroDim);

  std::unordered_set<std::string> seen;
  for (const Bag& bag : dataset.bags) {
    if (!seen.insert(bag.id).second) add(bag.id, kDuplicateId);
    if (bag.instances.empty()) {
      add(bag.id, kEmptyBag);
      continue;
    }
    bool dim_ok = true;
    bool finite = true;
    for (const Instance& x : bag.instances) {
      if (x.size() != dataset.dim) dim_ok = false;
      for (double v : x) {
        if (!std::isfinite(v)) finite = false;
      }
    }
    if (!dim_ok) add(bag.id, kDimensionMismatch);
    if (!finite) add(bag.id, kNonFinite);
  }
  return result;
}

void require_valid(const MilDataset& dataset) {
  const ValidationResult check = validate_dataset(dataset);
  if (check.ok()) return;
  const Violation& first = check.violations.front();
  std::string msg = "invalid dataset: " + first.rule;
  if (!first.bag_id.empty()) msg += " (bag " + first.bag_id + ")";
  if (check.violations.size() > 1) {
    msg += " and " + std::to_string(check.violations.size() - 1) + " more";
  }
  throw Error(msg);
}

DatasetSummary dataset_summary(const MilDataset& dataset) {
  DatasetSummary s;
  if (dataset.bags.empty()) return s;
  s.dim = dataset.dim;
  s.min_bag_size = dataset.bags.front().size();
  for (const Bag& bag : dataset.bags) {
    switch (bag.label) {
      case Label::positive:
        ++s.positive_bags;
        break;
      case Label::negative:
        ++s.negative_bags;
        break;
      case Label::unknown:
        ++s.unknown_bags;
        break;
    }
    s.total_instances += bag.size();
    s.min_bag_size = std::min(s.min_bag_size, bag.size());
    s.max_bag_size = std::max(s.max_bag_size, bag.size());
  }
  s.avg_bag_size = static_cast<double>(s.total_instances) /
                   static_cast<double>(dataset.bags.size());
  return s;
}

MilDataset strip_labels(const MilDataset& dataset) {
  MilDataset out = dataset;
  for (Bag& bag : out.bags) bag.label = Label::unknown;
  return out;
}

MilDataset subset(const MilDataset& dataset, const std::vector<std::size_t>& indices) {
  MilDataset out;
  out.dim = dataset.dim;
  out.bags.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= dataset.bags.size()) throw Error("subset index out of range");
    out.bags.push_back(dataset.bags[i]);
  }
  return out;
}

MilDataset concat(const MilDataset& first, const MilDataset& second) {
  if (!first.empty() && !second.empty() && first.dim != second.dim) {
    throw Error("cannot concatenate datasets of dimensionality " +
                std::to_string(first.dim) + " and " + std::to_string(second.dim));
  }
  MilDataset out = first;
  if (out.empty()) out.dim = second.dim;
  out.bags.insert(out.bags.end(), second.bags.begin(), second.bags.end());
  return out;
}

}  // namespace mind
