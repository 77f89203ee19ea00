#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mind {

struct Flow {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<Flow> flows;

  double total_mass() const;
};

struct TransportResult {
  double cost = 0.0;
  TransportPlan plan;
  std::size_t iterations = 0;
};

/// Exact balanced transportation problem with unit total mass.
///
/// supplies[i] leave source i, demands[j] arrive at target j, moving one unit
/// from i to j costs costs(i, j). Throws Error when the masses are negative
/// or do not both sum to 1 (within 1e-9).
TransportResult solve_transport(const std::vector<double>& supplies,
                                const std::vector<double>& demands,
                                const Eigen::MatrixXd& costs);

/// Same solver without the unit-mass requirement; totals must match to
/// within 1e-9 relative. Integer-valued masses stay exact throughout, which
/// is what the EMD path relies on.
TransportResult solve_balanced_transport(const std::vector<double>& supplies,
                                         const std::vector<double>& demands,
                                         const Eigen::MatrixXd& costs,
                                         std::size_t max_iterations = 0);

}  // namespace mind
