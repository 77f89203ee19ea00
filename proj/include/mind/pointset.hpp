#pragma once

#include <optional>
#include <string_view>

#include "mind/bag.hpp"

namespace mind {

enum class PointSetMeasure { minmin, meanmin, maxmin, hausdorff, meanmean };

enum class SymmetrizationMode { none, average, min, max };

std::string_view to_string(PointSetMeasure measure);
std::string_view to_string(SymmetrizationMode mode);
std::optional<PointSetMeasure> parse_pointset_measure(std::string_view name);
/// Accepts "none", "avg"/"average", "min", "max".
std::optional<SymmetrizationMode> parse_symmetrization(std::string_view name);

/// Sum of squared coordinate differences. Throws on dimension mismatch.
double sq_euclidean(const Instance& x, const Instance& y);

/// Point-set dissimilarity from `from` to `to` over squared Euclidean
/// instance distances. meanmin and maxmin are directed: they aggregate, over
/// the instances of `from`, the distance to the nearest instance of `to`.
/// hausdorff is max of both directed maxmin values.
double pointset_dissim(const Bag& from, const Bag& to, PointSetMeasure measure);

double symmetrize(double value_ij, double value_ji, SymmetrizationMode mode);

/// True for the measures whose value depends on argument order.
bool is_directed(PointSetMeasure measure);

}  // namespace mind
