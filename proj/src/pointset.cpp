#include "mind/pointset.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace mind {

std::string_view to_string(PointSetMeasure measure) {
  switch (measure) {
    case PointSetMeasure::minmin:
      return "minmin";
    case PointSetMeasure::meanmin:
      return "meanmin";
    case PointSetMeasure::maxmin:
      return "maxmin";
    case PointSetMeasure::hausdorff:
      return "hausdorff";
    case PointSetMeasure::meanmean:
      break;
  }
  return "meanmean";
}

std::string_view to_string(SymmetrizationMode mode) {
  switch (mode) {
    case SymmetrizationMode::none:
      return "none";
    case SymmetrizationMode::average:
      return "average";
    case SymmetrizationMode::min:
      return "min";
    case SymmetrizationMode::max:
      break;
  }
  return "max";
}

std::optional<PointSetMeasure> parse_pointset_measure(std::string_view name) {
  for (auto m : {PointSetMeasure::minmin, PointSetMeasure::meanmin, PointSetMeasure::maxmin,
                 PointSetMeasure::hausdorff, PointSetMeasure::meanmean}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<SymmetrizationMode> parse_symmetrization(std::string_view name) {
  if (name == "none") return SymmetrizationMode::none;
  if (name == "avg" || name == "average") return SymmetrizationMode::average;
  if (name == "min") return SymmetrizationMode::min;
  if (name == "max") return SymmetrizationMode::max;
  return std::nullopt;
}

double sq_euclidean(const Instance& x, const Instance& y) {
  if (x.size() != y.size()) {
    throw Error("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    sum += diff * diff;
  }
  return sum;
}

namespace {

void check_pair(const Bag& a, const Bag& b) {
  if (a.instances.empty()) throw Error("empty bag: " + a.id);
  if (b.instances.empty()) throw Error("empty bag: " + b.id);
  if (a.dim() != b.dim()) {
    throw Error("dimension mismatch between bags " + a.id + " and " + b.id);
  }
}

// Nearest-neighbour distance of each instance of `from` into `to`.
std::vector<double> nearest_distances(const Bag& from, const Bag& to) {
  std::vector<double> out;
  out.reserve(from.size());
  for (const Instance& x : from.instances) {
    double best = std::numeric_limits<double>::infinity();
    for (const Instance& y : to.instances) best = std::min(best, sq_euclidean(x, y));
    out.push_back(best);
  }
  return out;
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double max_of(const std::vector<double>& values) {
  return *std::max_element(values.begin(), values.end());
}

}  // namespace

double pointset_dissim(const Bag& from, const Bag& to, PointSetMeasure measure) {
  check_pair(from, to);
  switch (measure) {
    case PointSetMeasure::minmin: {
      double best = std::numeric_limits<double>::infinity();
      for (const Instance& x : from.instances) {
        for (const Instance& y : to.instances) best = std::min(best, sq_euclidean(x, y));
      }
      return best;
    }
    case PointSetMeasure::meanmin:
      return mean_of(nearest_distances(from, to));
    case PointSetMeasure::maxmin:
      return max_of(nearest_distances(from, to));
    case PointSetMeasure::hausdorff:
      return std::max(max_of(nearest_distances(from, to)), max_of(nearest_distances(to, from)));
    case PointSetMeasure::meanmean: {
      double sum = 0.0;
      for (const Instance& x : from.instances) {
        for (const Instance& y : to.instances) sum += sq_euclidean(x, y);
      }
      return sum / (static_cast<double>(from.size()) * static_cast<double>(to.size()));
    }
  }
  throw Error("unknown point-set measure");
}

double symmetrize(double value_ij, double value_ji, SymmetrizationMode mode) {
  switch (mode) {
    case SymmetrizationMode::none:
      return value_ij;
    case SymmetrizationMode::average:
      return 0.5 * (value_ij + value_ji);
    case SymmetrizationMode::min:
      return std::min(value_ij, value_ji);
    case SymmetrizationMode::max:
      return std::max(value_ij, value_ji);
  }
  return value_ij;
}

bool is_directed(PointSetMeasure measure) {
  return measure == PointSetMeasure::meanmin || measure == PointSetMeasure::maxmin;
}

}  // namespace mind
