#include "mind/measure.hpp"

namespace mind {

namespace {

constexpr MeasureKind kAllKinds[] = {
    MeasureKind::minmin,   MeasureKind::meanmin,     MeasureKind::maxmin, MeasureKind::hausdorff,
    MeasureKind::meanmean, MeasureKind::mahalanobis, MeasureKind::cs,     MeasureKind::emd};

std::optional<PointSetMeasure> as_pointset(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::minmin:
      return PointSetMeasure::minmin;
    case MeasureKind::meanmin:
      return PointSetMeasure::meanmin;
    case MeasureKind::maxmin:
      return PointSetMeasure::maxmin;
    case MeasureKind::hausdorff:
      return PointSetMeasure::hausdorff;
    case MeasureKind::meanmean:
      return PointSetMeasure::meanmean;
    default:
      return std::nullopt;
  }
}

}  // namespace

std::string_view to_string(MeasureKind kind) {
  if (auto ps = as_pointset(kind)) return to_string(*ps);
  switch (kind) {
    case MeasureKind::mahalanobis:
      return "mahalanobis";
    case MeasureKind::cs:
      return "cs";
    default:
      return "emd";
  }
}

std::optional<MeasureKind> parse_measure(std::string_view name) {
  for (MeasureKind kind : kAllKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

double bag_dissimilarity(const Bag& from, const Bag& to, const MeasureSpec& spec) {
  if (auto ps = as_pointset(spec.kind)) return pointset_dissim(from, to, *ps);
  switch (spec.kind) {
    case MeasureKind::mahalanobis:
      return mahalanobis_dissim(from, to, MahalanobisOptions{spec.ridge}).value;
    case MeasureKind::cs:
      return cs_divergence(from, to, CSParams{spec.sigma.value_or(default_cs_sigma(from.dim()))});
    case MeasureKind::emd:
      return emd(from, to, EmdOptions{spec.emd_max_instances}).cost;
    default:
      throw Error("unsupported measure");
  }
}

bool is_directed(MeasureKind kind) {
  if (auto ps = as_pointset(kind)) return is_directed(*ps);
  return false;
}

}  // namespace mind
