#include "mind/matrix_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "mind/random.hpp"

namespace mind {

namespace {

constexpr double kSymmetryTolerance = 1e-9;

double asymmetry(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

void require_square(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error("matrix must be square (got " + std::to_string(m.rows()) + "x" +
                std::to_string(m.cols()) + ")");
  }
}

}  // namespace

Eigen::MatrixXd gram_from_dissim(const Eigen::MatrixXd& d, bool square_first) {
  require_square(d);
  const Eigen::Index n = d.rows();
  if (n == 0) return {};
  if (asymmetry(d) > kSymmetryTolerance) {
    throw Error("dissimilarity matrix is asymmetric; symmetrize it first");
  }
  const Eigen::MatrixXd base = square_first ? Eigen::MatrixXd(d.array().square()) : d;
  // -1/2 J D J expanded: subtract row and column means, add back the grand mean.
  const Eigen::VectorXd row_mean = base.rowwise().mean();
  const Eigen::RowVectorXd col_mean = base.colwise().mean();
  const double grand = base.mean();
  Eigen::MatrixXd g = base;
  g.colwise() -= row_mean;
  g.rowwise() -= col_mean;
  g.array() += grand;
  g *= -0.5;
  return g;
}

Eigen::VectorXd eig_sym(const Eigen::MatrixXd& g) {
  require_square(g);
  const Eigen::Index n = g.rows();
  if (n == 0) return {};
  if (asymmetry(g) > kSymmetryTolerance) throw Error("eig_sym: matrix is not symmetric");

  Eigen::MatrixXd a = 0.5 * (g + g.transpose());
  const double scale = a.norm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= 1e-17 * scale || off == 0.0) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 0.0;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  Eigen::VectorXd values = a.diagonal();
  std::sort(values.data(), values.data() + n, std::greater<>());
  return values;
}

SpectrumReport nef_ner(const Eigen::MatrixXd& d, bool square_first) {
  SpectrumReport report;
  report.eigenvalues = eig_sym(gram_from_dissim(d, square_first));
  if (report.eigenvalues.size() == 0) return report;

  Eigen::VectorXd& lambda = report.eigenvalues;
  const double lambda_max = lambda.maxCoeff();
  const double reference = lambda_max > 0.0 ? lambda_max : lambda.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda[i]) < 1e-10 * reference) lambda[i] = 0.0;
  }
  double negative = 0.0;
  double total = 0.0;
  for (double l : lambda) {
    total += std::abs(l);
    if (l < 0.0) negative += -l;
  }
  report.nef = total > 0.0 ? negative / total : 0.0;
  const double lambda_min = lambda.minCoeff();
  if (lambda_min < 0.0) {
    report.ner = lambda_max > 0.0 ? -lambda_min / lambda_max
                                  : std::numeric_limits<double>::infinity();
  }
  return report;
}

SpectrumReport nef_ner(const DissimMatrix& d, bool square_first) {
  SpectrumReport report = nef_ner(d.values, square_first);
  report.source = d.measure;
  return report;
}

MetricityReport nmf(const Eigen::MatrixXd& d, const NmfOptions& options) {
  require_square(d);
  MetricityReport report;
  const Eigen::Index n = d.rows();
  if (n < 3) return report;
  report.symmetry_deviation = asymmetry(d);
  const Eigen::MatrixXd s =
      report.symmetry_deviation > 0.0 ? Eigen::MatrixXd(0.5 * (d + d.transpose())) : d;
  const double eps = 1e-12 * s.maxCoeff();

  auto violations = [&](Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    const double ij = s(i, j);
    const double ik = s(i, k);
    const double jk = s(j, k);
    return static_cast<std::uint64_t>(ik > ij + jk + eps) +
           static_cast<std::uint64_t>(ij > ik + jk + eps) +
           static_cast<std::uint64_t>(jk > ij + ik + eps);
  };

  if (static_cast<std::size_t>(n) <= options.exact_limit) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        for (Eigen::Index k = j + 1; k < n; ++k) {
          report.violated += violations(i, j, k);
          report.total += 3;
        }
      }
    }
  } else {
    report.sampled = true;
    report.seed = options.seed;
    Rng rng(options.seed);
    const auto count = static_cast<std::uint64_t>(n);
    for (std::uint64_t draw = 0; draw < options.samples; ++draw) {
      Eigen::Index i = 0;
      Eigen::Index j = 0;
      Eigen::Index k = 0;
      do {
        i = static_cast<Eigen::Index>(rng.below(count));
        j = static_cast<Eigen::Index>(rng.below(count));
        k = static_cast<Eigen::Index>(rng.below(count));
      } while (i == j || j == k || i == k);
      report.violated += violations(i, j, k);
      report.total += 3;
    }
  }
  report.nmf = static_cast<double>(report.violated) / static_cast<double>(report.total);
  return report;
}

MetricityReport nmf(const DissimMatrix& d, const NmfOptions& options) {
  MetricityReport report = nmf(d.values, options);
  report.source = d.measure;
  return report;
}

}  // namespace mind
