#include "mind/distribution.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace mind {

namespace {

void check_pair(const Bag& a, const Bag& b) {
  if (a.instances.empty()) throw Error("empty bag: " + a.id);
  if (b.instances.empty()) throw Error("empty bag: " + b.id);
  if (a.dim() != b.dim()) {
    throw Error("dimension mismatch between bags " + a.id + " and " + b.id);
  }
}

Eigen::Map<const Eigen::VectorXd> as_vector(const Instance& x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

constexpr double kMaxCondition = 1e12;

// True when the symmetric matrix is positive definite with condition number
// at most kMaxCondition.
bool well_conditioned(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  return lo > 0.0 && hi <= kMaxCondition * lo;
}

}  // namespace

GaussianSummary gaussian_summary(const Bag& bag) {
  if (bag.instances.empty()) throw Error("empty bag: " + bag.id);
  const auto d = static_cast<Eigen::Index>(bag.dim());
  const double n = static_cast<double>(bag.size());
  GaussianSummary s{Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
  for (const Instance& x : bag.instances) s.mean += as_vector(x);
  s.mean /= n;
  for (const Instance& x : bag.instances) {
    const Eigen::VectorXd centered = as_vector(x) - s.mean;
    s.covariance.noalias() += centered * centered.transpose();
  }
  s.covariance /= n;
  return s;
}

MahalanobisResult mahalanobis_dissim(const Bag& a, const Bag& b,
                                     const MahalanobisOptions& options) {
  check_pair(a, b);
  const GaussianSummary sa = gaussian_summary(a);
  const GaussianSummary sb = gaussian_summary(b);
  const Eigen::Index d = sa.mean.size();

  MahalanobisResult result;
  result.degenerate = a.size() == 1 || b.size() == 1;

  Eigen::MatrixXd pooled = 0.5 * sa.covariance + 0.5 * sb.covariance;
  if (options.ridge) {
    if (*options.ridge < 0.0) throw Error("mahalanobis: ridge must be non-negative");
    result.ridge = *options.ridge;
  } else if (!well_conditioned(pooled)) {
    const double trace = pooled.trace();
    result.ridge = trace > 0.0 ? 1e-6 * trace / static_cast<double>(d) : 1e-6;
  }
  pooled.diagonal().array() += result.ridge;

  if (!well_conditioned(pooled)) {
    throw Error("mahalanobis: pooled covariance of bags " + a.id + " and " + b.id +
                " is numerically singular (ridge " + std::to_string(result.ridge) + ")");
  }
  const Eigen::VectorXd diff = sa.mean - sb.mean;
  const Eigen::LLT<Eigen::MatrixXd> llt(pooled);
  result.value = diff.dot(llt.solve(diff));
  return result;
}

double mahalanobis_dissim(const Bag& a, const Bag& b, double ridge) {
  return mahalanobis_dissim(a, b, MahalanobisOptions{ridge}).value;
}

double default_cs_sigma(std::size_t dim) { return std::sqrt(static_cast<double>(dim)); }

namespace {

// Gaussian kernel sum with width `width`, normalizer omitted. All three sums
// in the divergence share one width, so the (2 pi width^2)^(d/2) factors
// cancel in the ratio.
double kernel_sum(const Bag& a, const Bag& b, double width) {
  const double scale = -1.0 / (2.0 * width * width);
  double sum = 0.0;
  for (const Instance& x : a.instances) {
    for (const Instance& y : b.instances) {
      double sq = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        sq += diff * diff;
      }
      sum += std::exp(scale * sq);
    }
  }
  return sum;
}

}  // namespace

double cs_divergence(const Bag& a, const Bag& b, const CSParams& params) {
  check_pair(a, b);
  if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
    throw Error("cs: sigma must be positive");
  }
  const double width = 2.0 * params.sigma;
  const double cross = kernel_sum(a, b, width);
  if (cross == 0.0) {
    throw Error("kernel underflow; increase sigma (bags " + a.id + ", " + b.id + ")");
  }
  const double self_a = kernel_sum(a, a, width);
  const double self_b = kernel_sum(b, b, width);
  return -std::log(cross) + 0.5 * (std::log(self_a) + std::log(self_b));
}

TransportResult emd(const Bag& a, const Bag& b, const EmdOptions& options) {
  check_pair(a, b);
  for (const Bag* bag : {&a, &b}) {
    if (bag->size() > options.max_instances) {
      throw Error("emd: bag " + bag->id + " too large (" + std::to_string(bag->size()) +
                  " instances, limit " + std::to_string(options.max_instances) + ")");
    }
  }
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  Eigen::MatrixXd ground(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nb));
  for (std::size_t k = 0; k < na; ++k) {
    for (std::size_t l = 0; l < nb; ++l) {
      ground(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          (as_vector(a.instances[k]) - as_vector(b.instances[l])).norm();
    }
  }
  // Scaled to integer masses: each source carries nb units, each target
  // absorbs na units, so every pivot is exact.
  const std::vector<double> supplies(na, static_cast<double>(nb));
  const std::vector<double> demands(nb, static_cast<double>(na));
  TransportResult result = solve_balanced_transport(supplies, demands, ground);
  const double total = static_cast<double>(na) * static_cast<double>(nb);
  result.cost /= total;
  for (Flow& f : result.plan.flows) f.mass /= total;
  return result;
}

}  // namespace mind
