#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "mind/dissim_space.hpp"

namespace mind {

/// G = -1/2 J D J with J = I - 11^T / n. D is taken as delivered (its entries
/// already play the role of squared distances) unless `square_first` is set,
/// in which case entries are squared before centering. Throws when D is not
/// square or deviates from symmetry by more than 1e-9.
Eigen::MatrixXd gram_from_dissim(const Eigen::MatrixXd& d, bool square_first = false);

/// Eigenvalues of a symmetric matrix, sorted descending (cyclic Jacobi).
Eigen::VectorXd eig_sym(const Eigen::MatrixXd& g);

struct SpectrumReport {
  std::string source;
  Eigen::VectorXd eigenvalues;
  double nef = 0.0;
  double ner = 0.0;
};

/// Negative eigenfraction sum_{l<0} |l| / sum |l| and negative eigenratio
/// |l_min| / l_max of the centered Gram matrix. Eigenvalues below
/// 1e-10 * l_max in magnitude count as zero.
SpectrumReport nef_ner(const DissimMatrix& d, bool square_first = false);
SpectrumReport nef_ner(const Eigen::MatrixXd& d, bool square_first = false);

struct MetricityReport {
  std::string source;
  double nmf = 0.0;
  std::uint64_t violated = 0;
  std::uint64_t total = 0;
  double symmetry_deviation = 0.0;
  bool sampled = false;
  std::uint64_t seed = 0;
};

struct NmfOptions {
  /// Exhaustive enumeration up to this many rows, sampling beyond.
  std::size_t exact_limit = 600;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
};

/// Fraction of violated triangle inequalities, three per unordered triple.
/// Asymmetric input is averaged with its transpose first; the largest
/// deviation is reported.
MetricityReport nmf(const DissimMatrix& d, const NmfOptions& options = {});
MetricityReport nmf(const Eigen::MatrixXd& d, const NmfOptions& options = {});

}  // namespace mind
