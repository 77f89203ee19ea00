#include "mind/datagen.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "mind/random.hpp"

namespace mind {

namespace {

constexpr double kConceptBackgroundStd = 2.0;
constexpr double kConceptStd = 0.1;
constexpr double kDistributionShift = 0.5;
constexpr double kMultiRadiusLo = 4.0;
constexpr double kMultiRadiusHi = 6.0;

void check(const GenConfig& config, std::size_t min_instances) {
  if (config.bags_per_class == 0) throw Error("bags_per_class must be positive");
  if (config.dim == 0) throw Error("dim must be positive");
  if (config.instances_per_bag < min_instances) {
    throw Error("instances_per_bag must be at least " + std::to_string(min_instances));
  }
}

Instance gaussian(Rng& rng, std::size_t dim, double mean0, double stddev) {
  Instance x(dim);
  for (std::size_t k = 0; k < dim; ++k) x[k] = rng.normal(k == 0 ? mean0 : 0.0, stddev);
  return x;
}

// Builds positives p0.. then negatives n0..; `draw` fills one bag.
using BagFiller = std::function<void(Rng&, bool positive, std::vector<Instance>&)>;

MilDataset assemble(const GenConfig& config, const BagFiller& draw) {
  MilDataset out;
  out.dim = config.dim;
  Rng rng(config.seed);
  for (bool positive : {true, false}) {
    for (std::size_t b = 0; b < config.bags_per_class; ++b) {
      Bag bag;
      bag.id = (positive ? "p" : "n") + std::to_string(b);
      bag.label = positive ? Label::positive : Label::negative;
      draw(rng, positive, bag.instances);
      out.bags.push_back(std::move(bag));
    }
  }
  return out;
}

}  // namespace

MilDataset gen_concept(const GenConfig& config) {
  check(config, 1);
  const std::size_t s = config.instances_per_bag;
  const std::size_t d = config.dim;
  return assemble(config, [&](Rng& rng, bool positive, std::vector<Instance>& inst) {
    const std::size_t slot = positive ? static_cast<std::size_t>(rng.below(s)) : s;
    for (std::size_t k = 0; k < s; ++k) {
      inst.push_back(gaussian(rng, d, 0.0, k == slot ? kConceptStd : kConceptBackgroundStd));
    }
  });
}

MilDataset gen_distribution(const GenConfig& config) {
  check(config, 2);
  const std::size_t s = config.instances_per_bag;
  const std::size_t d = config.dim;
  return assemble(config, [&](Rng& rng, bool positive, std::vector<Instance>& inst) {
    const double shift = positive ? kDistributionShift : -kDistributionShift;
    for (std::size_t k = 0; k < s; ++k) inst.push_back(gaussian(rng, d, shift, 1.0));
  });
}

MilDataset gen_multiconcept(const GenConfig& config) {
  check(config, 2);
  const std::size_t s = config.instances_per_bag;
  const std::size_t d = config.dim;
  return assemble(config, [&](Rng& rng, bool positive, std::vector<Instance>& inst) {
    const std::size_t slot = positive ? static_cast<std::size_t>(rng.below(s)) : s;
    for (std::size_t k = 0; k < s; ++k) {
      if (k != slot) {
        inst.push_back(gaussian(rng, d, 0.0, 1.0));
        continue;
      }
      Instance direction;
      double norm = 0.0;
      do {
        direction = gaussian(rng, d, 0.0, 1.0);
        norm = 0.0;
        for (double v : direction) norm += v * v;
        norm = std::sqrt(norm);
      } while (norm == 0.0);
      const double radius = rng.uniform(kMultiRadiusLo, kMultiRadiusHi);
      for (double& v : direction) v *= radius / norm;
      inst.push_back(std::move(direction));
    }
  });
}

std::optional<Problem> parse_problem(std::string_view name) {
  if (name == "concept") return Problem::kConcept;
  if (name == "distribution") return Problem::kDistribution;
  if (name == "multiconcept") return Problem::kMultiConcept;
  return std::nullopt;
}

std::string_view to_string(Problem problem) {
  switch (problem) {
    case Problem::kConcept:
      return "concept";
    case Problem::kDistribution:
      return "distribution";
    case Problem::kMultiConcept:
      break;
  }
  return "multiconcept";
}

MilDataset generate(Problem problem, const GenConfig& config) {
  switch (problem) {
    case Problem::kConcept:
      return gen_concept(config);
    case Problem::kDistribution:
      return gen_distribution(config);
    case Problem::kMultiConcept:
      break;
  }
  return gen_multiconcept(config);
}

}  // namespace mind
