#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mind {

/// Base exception for every failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Instance = std::vector<double>;

enum class Label { positive, negative, unknown };

std::string_view to_string(Label label);

/// An identified set of instances sharing one dimensionality. Instances are
/// stored in insertion order; measures never depend on that order.
struct Bag {
  std::string id;
  std::vector<Instance> instances;
  Label label = Label::unknown;

  std::size_t size() const { return instances.size(); }
  std::size_t dim() const { return instances.empty() ? 0 : instances.front().size(); }
};

struct MilDataset {
  std::vector<Bag> bags;
  std::size_t dim = 0;

  std::size_t size() const { return bags.size(); }
  bool empty() const { return bags.empty(); }
};

struct Violation {
  std::string bag_id;
  std::string rule;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Rules reported by validate_dataset.
inline constexpr std::string_view kEmptyBag = "empty bag";
inline constexpr std::string_view kDimensionMismatch = "dimension mismatch";
inline constexpr std::string_view kNonFinite = "non-finite value";
inline constexpr std::string_view kDuplicateId = "duplicate bag id";
inline constexpr std::string_view kZeroDim = "zero dimensionality";

ValidationResult validate_dataset(const MilDataset& dataset);

/// Throws Error listing the first violation when the dataset is invalid.
void require_valid(const MilDataset& dataset);

struct DatasetSummary {
  std::size_t positive_bags = 0;
  std::size_t negative_bags = 0;
  std::size_t unknown_bags = 0;
  std::size_t dim = 0;
  std::size_t total_instances = 0;
  std::size_t min_bag_size = 0;
  double avg_bag_size = 0.0;
  std::size_t max_bag_size = 0;
};

DatasetSummary dataset_summary(const MilDataset& dataset);

/// Copy of the dataset with every label replaced by Label::unknown.
MilDataset strip_labels(const MilDataset& dataset);

/// Bags at the given positions, in the given order.
MilDataset subset(const MilDataset& dataset, const std::vector<std::size_t>& indices);

/// Concatenation of two datasets with equal dimensionality.
MilDataset concat(const MilDataset& first, const MilDataset& second);

}  // namespace mind
