#include <doctest.h>

#include "mind/dissim_space.hpp"
#include "mind/matrix_analysis.hpp"
#include "oracles.hpp"

using namespace mind;

namespace {

Eigen::MatrixXd sq_dist_1d(const std::vector<double>& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (p[i] - p[j]) * (p[i] - p[j]);
  }
  return d;
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& gen, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index k = 0; k < a.size(); ++k) a.data()[k] = g(gen);
  return 0.5 * (a + a.transpose());
}

}  // namespace

TEST_CASE("gram_from_dissim") {
  CHECK(gram_from_dissim(Eigen::MatrixXd::Zero(4, 4)).isZero(0.0));

  const Eigen::MatrixXd g = gram_from_dissim(sq_dist_1d({0, 1, 3}));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);

  std::mt19937_64 gen(2);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd d = random_symmetric(gen, 12).cwiseAbs();
    d.diagonal().setZero();
    const Eigen::MatrixXd gg = gram_from_dissim(d);
    CHECK(gg.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    // Independent formula: g_ij = -1/2 (d_ij - rowmean_i - colmean_j + grandmean).
    const Eigen::VectorXd rm = d.rowwise().mean();
    const Eigen::RowVectorXd cm = d.colwise().mean();
    const double gm = d.mean();
    for (Eigen::Index i = 0; i < 12; ++i) {
      for (Eigen::Index j = 0; j < 12; ++j) {
        CHECK(gg(i, j) == doctest::Approx(-0.5 * (d(i, j) - rm(i) - cm(j) + gm)).epsilon(1e-12));
      }
    }
  }

  Eigen::MatrixXd asym = sq_dist_1d({0, 1, 2});
  asym(0, 1) += 1e-3;
  CHECK_THROWS_WITH_AS(gram_from_dissim(asym), doctest::Contains("symmetrize"), Error);
  CHECK_THROWS_AS(gram_from_dissim(Eigen::MatrixXd::Zero(2, 3)), Error);

  // square_first squares the entries before centering.
  const Eigen::MatrixXd dist = sq_dist_1d({0, 1, 3}).cwiseSqrt();
  CHECK(gram_from_dissim(dist, true).isApprox(g, 1e-14));
}

TEST_CASE("eig_sym against a reference decomposition") {
  CHECK(eig_sym(Eigen::MatrixXd::Identity(3, 3)) == Eigen::Vector3d(1, 1, 1));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = -1;
  d(1, 1) = 2;
  CHECK(eig_sym(d) == Eigen::Vector2d(2, -1));

  std::mt19937_64 gen(3);
  for (Eigen::Index n : {1, 2, 5, 10, 25, 50}) {
    const Eigen::MatrixXd a = random_symmetric(gen, n);
    const Eigen::VectorXd got = eig_sym(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::VectorXd want = es.eigenvalues().reverse();
    const double scale = want.cwiseAbs().maxCoeff();
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    CHECK(std::abs(got.sum() - a.trace()) <= 1e-9 * std::max(1.0, scale));
    for (Eigen::Index k = 1; k < n; ++k) CHECK(got(k) <= got(k - 1));
  }
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 2) = 1;
  CHECK_THROWS_AS(eig_sym(bad), Error);
}

TEST_CASE("nef and ner") {
  SUBCASE("euclidean input") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd pts(15, 3);
    for (Eigen::Index k = 0; k < pts.size(); ++k) pts.data()[k] = g(gen);
    Eigen::MatrixXd d(15, 15);
    for (Eigen::Index i = 0; i < 15; ++i) {
      for (Eigen::Index j = 0; j < 15; ++j) d(i, j) = (pts.row(i) - pts.row(j)).squaredNorm();
    }
    d = 0.5 * (d + d.transpose());
    const SpectrumReport r = nef_ner(d);
    CHECK(r.nef <= 1e-8);
    CHECK(r.ner <= 1e-8);
  }
  SUBCASE("line-violating matrix") {
    Eigen::Matrix3d d;
    d << 0, 1, 9, 1, 0, 1, 9, 1, 0;
    const SpectrumReport r = nef_ner(Eigen::MatrixXd(d));
    CHECK(r.nef > 0.0);
    CHECK(r.ner > 0.0);
    // Oracle from the reference eigensolver.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_from_dissim(d));
    const Eigen::VectorXd ev = es.eigenvalues();
    double neg = 0.0;
    double all = 0.0;
    for (double l : ev) {
      all += std::abs(l);
      if (l < 0) neg -= l;
    }
    CHECK(r.nef == doctest::Approx(neg / all).epsilon(1e-10));
    CHECK(r.ner == doctest::Approx(-ev.minCoeff() / ev.maxCoeff()).epsilon(1e-10));
    CHECK(r.nef <= 1.0);

    const SpectrumReport scaled = nef_ner(Eigen::MatrixXd(7.5 * d));
    CHECK(scaled.nef == doctest::Approx(r.nef).epsilon(1e-12));
    CHECK(scaled.ner == doctest::Approx(r.ner).epsilon(1e-12));
  }
  SUBCASE("zero matrix") {
    const SpectrumReport r = nef_ner(Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 3)));
    CHECK(r.nef == 0.0);
    CHECK(r.ner == 0.0);
  }
}

TEST_CASE("nmf") {
  SUBCASE("hand example") {
    Eigen::Matrix3d d;
    d << 0, 1, 3, 1, 0, 1, 3, 1, 0;
    const MetricityReport r = nmf(Eigen::MatrixXd(d));
    CHECK(r.violated == 1);
    CHECK(r.total == 3);
    CHECK(r.nmf == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("collinear squared distances: non-metric but Euclidean") {
    const Eigen::MatrixXd d = sq_dist_1d({0, 1, 2});
    CHECK(nmf(d).nmf == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(nef_ner(d).nef <= 1e-8);
  }
  SUBCASE("metric and small inputs") {
    CHECK(nmf(sq_dist_1d({0, 1, 3, 7}).cwiseSqrt()).nmf == 0.0);
    const MetricityReport small = nmf(Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 2)));
    CHECK(small.nmf == 0.0);
    CHECK(small.total == 0);
  }
  SUBCASE("random matrices agree with triple enumeration") {
    std::mt19937_64 gen(5);
    for (int t = 0; t < 10; ++t) {
      Eigen::MatrixXd d = random_symmetric(gen, 20).cwiseAbs();
      d.diagonal().setZero();
      const oracle::TriangleCount want = oracle::triangles(d);
      const MetricityReport r = nmf(d);
      CHECK(r.violated == want.violated);
      CHECK(r.total == want.total);
      CHECK(r.nmf == static_cast<double>(want.violated) / static_cast<double>(want.total));
      CHECK_FALSE(r.sampled);
    }
  }
  SUBCASE("asymmetric input is averaged and the deviation reported") {
    Eigen::Matrix3d d;
    d << 0, 1, 3, 1, 0, 1, 3, 1, 0;
    Eigen::MatrixXd a = d;
    a(0, 2) = 3.5;
    a(2, 0) = 2.5;
    const MetricityReport r = nmf(a);
    CHECK(r.symmetry_deviation == 1.0);
    CHECK(r.violated == 1);
  }
  SUBCASE("sampling above the exact limit") {
    std::mt19937_64 gen(6);
    Eigen::MatrixXd d = random_symmetric(gen, 40).cwiseAbs();
    d.diagonal().setZero();
    NmfOptions opt;
    opt.exact_limit = 10;
    opt.samples = 200000;
    opt.seed = 9;
    const MetricityReport r = nmf(d, opt);
    CHECK(r.sampled);
    CHECK(r.seed == 9);
    CHECK(r.total == 3 * opt.samples);
    const oracle::TriangleCount exact = oracle::triangles(d);
    CHECK(std::abs(r.nmf - static_cast<double>(exact.violated) / static_cast<double>(exact.total)) < 0.01);
    CHECK(nmf(d, opt).violated == r.violated);
  }
}

TEST_CASE("emd matrices are metric") {
  std::mt19937_64 gen(7);
  MilDataset ds;
  ds.dim = 2;
  for (int i = 0; i < 15; ++i) ds.bags.push_back(oracle::random_bag(gen, 1 + gen() % 5, 2, "b" + std::to_string(i)));
  const DissimMatrix m = compute_matrix(ds, select_prototypes(ds, PrototypeStrategy::all, 0, 0),
                                        MeasureSpec{MeasureKind::emd});
  const MetricityReport r = nmf(m);
  CHECK(r.nmf == 0.0);
  CHECK(r.symmetry_deviation <= 1e-12);
}
