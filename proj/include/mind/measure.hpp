#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mind/bag.hpp"
#include "mind/distribution.hpp"
#include "mind/pointset.hpp"

namespace mind {

enum class MeasureKind { minmin, meanmin, maxmin, hausdorff, meanmean, mahalanobis, cs, emd };

std::string_view to_string(MeasureKind kind);
std::optional<MeasureKind> parse_measure(std::string_view name);

/// A bag dissimilarity together with its parameters.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::meanmin;
  /// Cauchy-Schwarz kernel width; unset means sqrt(dim).
  std::optional<double> sigma;
  /// Mahalanobis ridge; unset means automatic.
  std::optional<double> ridge;
  std::size_t emd_max_instances = 512;
};

/// d(from, to) for any supported measure.
double bag_dissimilarity(const Bag& from, const Bag& to, const MeasureSpec& spec);

bool is_directed(MeasureKind kind);

}  // namespace mind
