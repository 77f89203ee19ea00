#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "mind/bag.hpp"
#include "mind/transport.hpp"

namespace mind {

/// Maximum-likelihood mean and covariance (divide by n) of a bag.
struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

GaussianSummary gaussian_summary(const Bag& bag);

struct MahalanobisOptions {
  /// Fixed ridge added to the pooled covariance. When unset the ridge is
  /// chosen automatically: zero for well-conditioned pooled matrices,
  /// otherwise 1e-6 * trace / d (1e-6 when the trace is zero).
  std::optional<double> ridge;
};

struct MahalanobisResult {
  double value = 0.0;
  double ridge = 0.0;
  /// Set when either bag has a single instance, so its covariance is zero.
  bool degenerate = false;
};

/// (mu_i - mu_j)^T (Sigma_i / 2 + Sigma_j / 2 + ridge I)^-1 (mu_i - mu_j).
MahalanobisResult mahalanobis_dissim(const Bag& a, const Bag& b,
                                     const MahalanobisOptions& options = {});

/// Convenience overload with an explicit ridge.
double mahalanobis_dissim(const Bag& a, const Bag& b, double ridge);

struct CSParams {
  double sigma = 1.0;
};

/// Default kernel width for `dim`-dimensional data: sqrt(dim).
double default_cs_sigma(std::size_t dim);

/// Cauchy-Schwarz divergence between Gaussian-kernel density estimates of
/// the two bags. Kernel sums run over all instance pairs without dividing by
/// bag sizes, so the value depends on how densely each bag is sampled.
double cs_divergence(const Bag& a, const Bag& b, const CSParams& params);

struct EmdOptions {
  /// Bags with more instances than this are rejected.
  std::size_t max_instances = 512;
};

/// Earth mover's distance with 1/n_i mass per instance and Euclidean ground
/// distance. The returned plan attains the optimum.
TransportResult emd(const Bag& a, const Bag& b, const EmdOptions& options = {});

}  // namespace mind
