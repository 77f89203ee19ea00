#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mind/bag.hpp"
#include "mind/measure.hpp"

namespace mind {

/// Rows are the represented bags, columns the prototypes.
struct DissimMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  Eigen::MatrixXd values;
  std::string measure;
  SymmetrizationMode symmetrization = SymmetrizationMode::none;

  std::size_t rows() const { return row_ids.size(); }
  std::size_t cols() const { return col_ids.size(); }
};

/// Bags-as-rows numeric table consumed by the classifiers. Rows of bags to
/// be scored may carry Label::unknown; training requires known labels.
struct FeatureTable {
  std::vector<std::string> row_ids;
  std::vector<Label> labels;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;

  std::size_t rows() const { return row_ids.size(); }
  std::size_t cols() const { return columns.size(); }
};

enum class PrototypeStrategy { all, random };

struct PrototypeSet {
  std::vector<Bag> bags;
  PrototypeStrategy strategy = PrototypeStrategy::all;
  std::uint64_t seed = 0;

  std::vector<std::string> ids() const;
  std::size_t size() const { return bags.size(); }
};

/// Prototypes drawn from the training bags. "all" keeps every bag in dataset
/// order and ignores `count`; "random" samples `count` distinct bags with the
/// given seed and returns them in dataset order.
PrototypeSet select_prototypes(const MilDataset& training, PrototypeStrategy strategy,
                               std::size_t count, std::uint64_t seed);

enum class Direction {
  to,    ///< d(B_i, P_j)
  from,  ///< d(P_j, B_i)
};

struct MatrixOptions {
  SymmetrizationMode symmetrization = SymmetrizationMode::none;
  Direction direction = Direction::to;
  /// Worker threads for the (bag, prototype) fan-out; 0 and 1 both mean
  /// single-threaded. The result does not depend on this value.
  unsigned threads = 1;
};

DissimMatrix compute_matrix(const MilDataset& bags, const PrototypeSet& prototypes,
                            const MeasureSpec& measure, const MatrixOptions& options = {});

enum class RepresentationMode { to, from, extended };

std::string_view to_string(RepresentationMode mode);
std::optional<RepresentationMode> parse_representation(std::string_view name);

/// Turns directed matrices into a feature table. `labels` supplies the row
/// labels by bag id order of the matrices' rows (may be empty for all-unknown).
FeatureTable build_representation(const DissimMatrix& to_matrix,
                                  const std::optional<DissimMatrix>& from_matrix,
                                  RepresentationMode mode, const std::vector<Label>& labels = {});

/// Labels of `bags` as a vector, for build_representation.
std::vector<Label> labels_of(const MilDataset& bags);

}  // namespace mind
