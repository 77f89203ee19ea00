#include "mind/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mind/bag.hpp"

namespace mind {

double TransportPlan::total_mass() const {
  double total = 0.0;
  for (const Flow& f : flows) total += f.mass;
  return total;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Transportation simplex (MODI / stepping stone). The basis is kept as a
// spanning tree over m row nodes and n column nodes with exactly m + n - 1
// basic cells, degenerate zero cells included.
class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& supplies, const std::vector<double>& demands,
                   const Eigen::MatrixXd& costs)
      : m_(supplies.size()), n_(demands.size()), costs_(costs) {
    flow_.assign(m_ * n_, 0.0);
    basic_.assign(m_ * n_, 0);
    northwest_corner(supplies, demands);
    double max_cost = 0.0;
    for (Eigen::Index i = 0; i < costs.rows(); ++i) {
      for (Eigen::Index j = 0; j < costs.cols(); ++j) {
        max_cost = std::max(max_cost, std::abs(costs(i, j)));
      }
    }
    tolerance_ = 1e-11 * std::max(1.0, max_cost);
  }

  std::size_t run(std::size_t max_iterations) {
    std::size_t iterations = 0;
    std::size_t degenerate_streak = 0;
    double last_reduced = 0.0;
    for (;;) {
      compute_potentials();
      const bool bland = degenerate_streak > 2 * (m_ + n_);
      const std::size_t entering = choose_entering(bland, last_reduced);
      if (entering == kNone) return iterations;
      if (iterations >= max_iterations) {
        throw Error("transport solver did not converge after " + std::to_string(iterations) +
                    " iterations (" + std::to_string(m_) + "x" + std::to_string(n_) +
                    " problem, most negative reduced cost " + std::to_string(last_reduced) + ")");
      }
      const double theta = pivot(entering);
      degenerate_streak = theta > 0.0 ? 0 : degenerate_streak + 1;
      ++iterations;
    }
  }

  TransportResult result(std::size_t iterations) const {
    TransportResult out;
    out.iterations = iterations;
    for (std::size_t cell : cells_) {
      const double mass = flow_[cell];
      if (mass <= 0.0) continue;
      const std::size_t i = cell / n_;
      const std::size_t j = cell % n_;
      out.cost += mass * costs_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out.plan.flows.push_back({i, j, mass});
    }
    std::sort(out.plan.flows.begin(), out.plan.flows.end(), [](const Flow& a, const Flow& b) {
      return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    return out;
  }

 private:
  double cost(std::size_t cell) const {
    return costs_(static_cast<Eigen::Index>(cell / n_), static_cast<Eigen::Index>(cell % n_));
  }

  void add_basic(std::size_t cell, double mass) {
    basic_[cell] = 1;
    flow_[cell] = mass;
    cells_.push_back(cell);
  }

  void northwest_corner(std::vector<double> supply, std::vector<double> demand) {
    std::size_t i = 0;
    std::size_t j = 0;
    cells_.reserve(m_ + n_ - 1);
    for (;;) {
      const double mass = std::min(supply[i], demand[j]);
      add_basic(i * n_ + j, mass);
      supply[i] -= mass;
      demand[j] -= mass;
      if (i + 1 == m_ && j + 1 == n_) break;
      if (i + 1 == m_) {
        ++j;
      } else if (j + 1 == n_) {
        ++i;
      } else if (supply[i] <= demand[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void build_adjacency() {
    adjacency_.assign(m_ + n_, {});
    for (std::size_t cell : cells_) {
      const std::size_t row = cell / n_;
      const std::size_t col = m_ + cell % n_;
      adjacency_[row].push_back(cell);
      adjacency_[col].push_back(cell);
    }
  }

  std::size_t other_end(std::size_t node, std::size_t cell) const {
    const std::size_t row = cell / n_;
    const std::size_t col = m_ + cell % n_;
    return node == row ? col : row;
  }

  void compute_potentials() {
    build_adjacency();
    potential_.assign(m_ + n_, 0.0);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t cell : adjacency_[node]) {
        const std::size_t next = other_end(node, cell);
        if (seen[next]) continue;
        seen[next] = 1;
        // u_row + v_col = c for every basic cell
        potential_[next] = cost(cell) - potential_[node];
        stack.push_back(next);
      }
    }
  }

  std::size_t choose_entering(bool bland, double& most_negative) const {
    std::size_t best = kNone;
    double best_value = -tolerance_;
    most_negative = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t cell = i * n_ + j;
        if (basic_[cell]) continue;
        const double reduced = cost(cell) - potential_[i] - potential_[m_ + j];
        most_negative = std::min(most_negative, reduced);
        if (reduced < best_value) {
          best = cell;
          best_value = reduced;
          if (bland) return best;
        }
      }
    }
    return best;
  }

  // Cells on the tree path from the entering cell's column back to its row,
  // in walking order.
  std::vector<std::size_t> tree_path(std::size_t row, std::size_t col) const {
    std::vector<std::size_t> parent_cell(m_ + n_, kNone);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{row};
    seen[row] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      if (node == col) break;
      for (std::size_t cell : adjacency_[node]) {
        const std::size_t next = other_end(node, cell);
        if (seen[next]) continue;
        seen[next] = 1;
        parent_cell[next] = cell;
        stack.push_back(next);
      }
    }
    std::vector<std::size_t> path;
    for (std::size_t node = col; node != row;) {
      const std::size_t cell = parent_cell[node];
      if (cell == kNone) throw Error("transport solver: basis is not a spanning tree");
      path.push_back(cell);
      node = other_end(node, cell);
    }
    return path;
  }

  double pivot(std::size_t entering) {
    const std::size_t row = entering / n_;
    const std::size_t col = m_ + entering % n_;
    const std::vector<std::size_t> path = tree_path(row, col);

    // Even positions lose mass, odd positions gain it.
    std::size_t leaving = kNone;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      if (flow_[path[k]] < theta) {
        theta = flow_[path[k]];
        leaving = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      flow_[path[k]] += (k % 2 == 0) ? -theta : theta;
    }
    flow_[leaving] = 0.0;
    basic_[leaving] = 0;
    *std::find(cells_.begin(), cells_.end(), leaving) = entering;
    basic_[entering] = 1;
    flow_[entering] = theta;
    return theta;
  }

  std::size_t m_;
  std::size_t n_;
  const Eigen::MatrixXd& costs_;
  std::vector<double> flow_;
  std::vector<char> basic_;
  std::vector<std::size_t> cells_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<double> potential_;
  double tolerance_ = 0.0;
};

void check_masses(const std::vector<double>& masses, const char* what) {
  for (double v : masses) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(std::string("transport: ") + what + " must be finite and non-negative");
    }
  }
}

double sum_of(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

TransportResult solve_balanced_transport(const std::vector<double>& supplies,
                                         const std::vector<double>& demands,
                                         const Eigen::MatrixXd& costs,
                                         std::size_t max_iterations) {
  if (supplies.empty() || demands.empty()) throw Error("transport: empty problem");
  if (costs.rows() != static_cast<Eigen::Index>(supplies.size()) ||
      costs.cols() != static_cast<Eigen::Index>(demands.size())) {
    throw Error("transport: cost matrix shape does not match masses");
  }
  if (!costs.allFinite() || (costs.array() < 0.0).any()) {
    throw Error("transport: costs must be finite and non-negative");
  }
  check_masses(supplies, "supplies");
  check_masses(demands, "demands");
  const double total_supply = sum_of(supplies);
  const double total_demand = sum_of(demands);
  if (std::abs(total_supply - total_demand) > 1e-9 * std::max(1.0, total_supply)) {
    throw Error("transport: unbalanced masses (supply " + std::to_string(total_supply) +
                ", demand " + std::to_string(total_demand) + ")");
  }
  const std::size_t m = supplies.size();
  const std::size_t n = demands.size();
  if (max_iterations == 0) max_iterations = 10000 + 10 * m * n;

  TransportSimplex simplex(supplies, demands, costs);
  const std::size_t iterations = simplex.run(max_iterations);
  return simplex.result(iterations);
}

TransportResult solve_transport(const std::vector<double>& supplies,
                                const std::vector<double>& demands,
                                const Eigen::MatrixXd& costs) {
  check_masses(supplies, "supplies");
  check_masses(demands, "demands");
  const double total_supply = sum_of(supplies);
  const double total_demand = sum_of(demands);
  if (std::abs(total_supply - 1.0) > 1e-9 || std::abs(total_demand - 1.0) > 1e-9) {
    throw Error("transport: unbalanced masses (supply " + std::to_string(total_supply) +
                ", demand " + std::to_string(total_demand) + ", both must equal 1)");
  }
  return solve_balanced_transport(supplies, demands, costs);
}

}  // namespace mind
