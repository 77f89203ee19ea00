#include <doctest.h>

#include "mind/distribution.hpp"
#include "mind/measure.hpp"
#include "oracles.hpp"

using namespace mind;
using oracle::make_bag;

namespace {

// CS with the Gaussian normalizer kept, kernel standard deviation 2 sigma.
double cs_with_normalizer(const Bag& a, const Bag& b, double sigma) {
  const double s2 = 4.0 * sigma * sigma;
  const double d = static_cast<double>(a.dim());
  const double norm = std::pow(2.0 * M_PI * s2, -d / 2.0);
  auto k = [&](const Bag& x, const Bag& y) {
    const Eigen::MatrixXd p = oracle::pairwise_sq(x, y);
    return norm * (-p.array() / (2.0 * s2)).exp().sum();
  };
  return -std::log(k(a, b) / std::sqrt(k(a, a) * k(b, b)));
}

Bag affine(const Bag& b, const Eigen::MatrixXd& m, const Eigen::VectorXd& t) {
  Bag out = b;
  for (Instance& x : out.instances) {
    const Eigen::VectorXd y = m * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())) + t;
    x.assign(y.data(), y.data() + y.size());
  }
  return out;
}

}  // namespace

TEST_CASE("gaussian_summary uses maximum-likelihood covariance") {
  const GaussianSummary g = gaussian_summary(make_bag("a", {{0, 1}, {2, 3}}));
  CHECK(g.mean(0) == 1.0);
  CHECK(g.mean(1) == 2.0);
  CHECK(g.covariance(0, 0) == 1.0);
  CHECK(g.covariance(0, 1) == 1.0);
  CHECK(g.covariance(1, 1) == 1.0);
}

TEST_CASE("mahalanobis hand example and identities") {
  const Bag b1 = make_bag("B1", {{0}, {2}});
  const Bag b2 = make_bag("B2", {{4}, {6}});
  CHECK(mahalanobis_dissim(b1, b2, 0.0) == doctest::Approx(16.0).epsilon(1e-15));
  CHECK(mahalanobis_dissim(b1, b1, 0.0) == 0.0);

  std::mt19937_64 gen(4);
  for (int t = 0; t < 40; ++t) {
    const Bag a = oracle::random_bag(gen, 8, 3, "a");
    const Bag b = oracle::random_bag(gen, 6, 3, "b");
    const MahalanobisResult ab = mahalanobis_dissim(a, b, MahalanobisOptions{0.0});
    const MahalanobisResult ba = mahalanobis_dissim(b, a, MahalanobisOptions{0.0});
    CHECK(ab.value == ba.value);
    CHECK(ab.value >= 0.0);
    CHECK_FALSE(ab.degenerate);

    Eigen::MatrixXd m = Eigen::MatrixXd::Random(3, 3) + 3.0 * Eigen::MatrixXd::Identity(3, 3);
    const Eigen::VectorXd shift = Eigen::VectorXd::Random(3);
    const double moved = mahalanobis_dissim(affine(a, m, shift), affine(b, m, shift), 0.0);
    CHECK(std::abs(moved - ab.value) <= 1e-6 * std::max(1.0, ab.value));
  }
}

TEST_CASE("mahalanobis ridge handling") {
  const Bag x = make_bag("x", {{0, 0}});
  const Bag y = make_bag("y", {{3, 4}});
  const MahalanobisResult auto_ridge = mahalanobis_dissim(x, y);
  CHECK(auto_ridge.degenerate);
  CHECK(auto_ridge.ridge == 1e-6);
  // Zero covariance: ridge-scaled squared Euclidean.
  CHECK(auto_ridge.value == doctest::Approx(25.0 / 1e-6).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(mahalanobis_dissim(x, y, 0.0), doctest::Contains("x"), Error);
  CHECK_THROWS_WITH_AS(mahalanobis_dissim(x, y, 0.0), doctest::Contains("y"), Error);

  // Well-conditioned pooled covariance: no ridge added.
  std::mt19937_64 gen(6);
  const Bag a = oracle::random_bag(gen, 30, 2, "a");
  const Bag b = oracle::random_bag(gen, 30, 2, "b");
  CHECK(mahalanobis_dissim(a, b).ridge == 0.0);

  // Collinear bags: singular pooled matrix, ridge 1e-6 * trace / d.
  const Bag c = make_bag("c", {{0, 0}, {1, 1}, {2, 2}});
  const Bag d = make_bag("d", {{1, 0}, {2, 1}, {3, 2}});
  const MahalanobisResult r = mahalanobis_dissim(c, d);
  const double trace = 0.5 * (2.0 / 3.0 * 2) + 0.5 * (2.0 / 3.0 * 2);
  CHECK(r.ridge == doctest::Approx(1e-6 * trace / 2.0).epsilon(1e-12));
  CHECK(std::isfinite(r.value));
}

TEST_CASE("cauchy-schwarz divergence") {
  const Bag a = make_bag("a", {{0}});
  const Bag b = make_bag("b", {{2}});
  CHECK(cs_divergence(a, b, {1.0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(cs_divergence(a, b, {1.0}) - 4.0 / 8.0) <= 1e-9);
  CHECK(default_cs_sigma(4) == 2.0);

  std::mt19937_64 gen(10);
  for (int t = 0; t < 60; ++t) {
    const std::size_t dim = 1 + gen() % 4;
    const Bag p = oracle::random_bag(gen, 1 + gen() % 6, dim, "p");
    const Bag q = oracle::random_bag(gen, 1 + gen() % 6, dim, "q");
    const double sigma = 0.5 + static_cast<double>(gen() % 100) / 50.0;
    const double v = cs_divergence(p, q, {sigma});
    CHECK(v >= -1e-9);
    CHECK(v == doctest::Approx(cs_divergence(q, p, {sigma})).epsilon(1e-12));
    CHECK(v == doctest::Approx(cs_with_normalizer(p, q, sigma)).epsilon(1e-10));
    CHECK(std::abs(cs_divergence(p, p, {sigma})) <= 1e-12);
  }

  const Bag far = make_bag("far", {{1e3}});
  CHECK_THROWS_WITH_AS(cs_divergence(a, far, {0.01}), doctest::Contains("kernel underflow; increase sigma"), Error);
}

TEST_CASE("cauchy-schwarz stays finite in high dimension") {
  std::mt19937_64 gen(12);
  const Bag p = oracle::random_bag(gen, 5, 166, "p");
  const Bag q = oracle::random_bag(gen, 7, 166, "q");
  const double v = cs_divergence(p, q, {default_cs_sigma(166)});
  CHECK(std::isfinite(v));
  CHECK(v >= 0.0);
}

TEST_CASE("emd examples") {
  const Bag zero = make_bag("z", {{0}});
  const Bag one = make_bag("o", {{1}});
  const Bag pair = make_bag("p", {{0}, {2}});
  CHECK(emd(zero, one).cost == 1.0);
  CHECK(emd(pair, one).cost == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(emd(pair, pair).cost == 0.0);

  const TransportResult r = emd(pair, one);
  CHECK(r.plan.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
  for (const Flow& f : r.plan.flows) CHECK(f.mass <= 0.5 + 1e-15);
}

TEST_CASE("emd matches vertex enumeration on small bags") {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 200; ++t) {
    const std::size_t dim = 1 + gen() % 5;
    const Bag a = oracle::random_bag(gen, 1 + gen() % 3, dim, "a");
    const Bag b = oracle::random_bag(gen, 1 + gen() % 3, dim, "b");
    CHECK(std::abs(emd(a, b).cost - oracle::emd_by_vertices(a, b)) <= 1e-9);
  }
}

TEST_CASE("emd is a metric and ignores instance order") {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 60; ++t) {
    const Bag a = oracle::random_bag(gen, 1 + gen() % 6, 3, "a");
    const Bag b = oracle::random_bag(gen, 1 + gen() % 6, 3, "b");
    const Bag c = oracle::random_bag(gen, 1 + gen() % 6, 3, "c");
    const double ab = emd(a, b).cost;
    const double bc = emd(b, c).cost;
    const double ac = emd(a, c).cost;
    CHECK(std::abs(ab - emd(b, a).cost) <= 1e-9);
    CHECK(ac <= ab + bc + 1e-9);

    Bag shuffled = a;
    std::shuffle(shuffled.instances.begin(), shuffled.instances.end(), gen);
    CHECK(std::abs(emd(shuffled, b).cost - ab) <= 1e-12);
  }
}

TEST_CASE("emd rejects bags above the instance cap") {
  std::mt19937_64 gen(15);
  const Bag big = oracle::random_bag(gen, 20, 2, "big");
  const Bag small = oracle::random_bag(gen, 3, 2, "small");
  CHECK_THROWS_WITH_AS(emd(big, small, EmdOptions{10}), doctest::Contains("big"), Error);
  CHECK_NOTHROW(emd(big, small, EmdOptions{20}));
}

TEST_CASE("bag_dissimilarity dispatches every measure") {
  const Bag b1 = make_bag("B1", {{0, 0}, {1, 0}});
  const Bag b2 = make_bag("B2", {{2, 0}});
  MeasureSpec spec;
  spec.kind = MeasureKind::meanmin;
  CHECK(bag_dissimilarity(b1, b2, spec) == 2.5);
  spec.kind = MeasureKind::emd;
  CHECK(bag_dissimilarity(b1, b2, spec) == doctest::Approx(1.5).epsilon(1e-15));
  spec.kind = MeasureKind::cs;
  CHECK(bag_dissimilarity(b1, b2, spec) == doctest::Approx(cs_divergence(b1, b2, {std::sqrt(2.0)})).epsilon(1e-15));
  spec.sigma = 3.0;
  CHECK(bag_dissimilarity(b1, b2, spec) == cs_divergence(b1, b2, {3.0}));
  spec.kind = MeasureKind::mahalanobis;
  spec.ridge = 0.5;
  CHECK(bag_dissimilarity(b1, b2, spec) == mahalanobis_dissim(b1, b2, 0.5));
  for (const char* name : {"minmin", "meanmin", "maxmin", "hausdorff", "meanmean", "mahalanobis", "cs", "emd"}) {
    const auto kind = parse_measure(name);
    REQUIRE(kind.has_value());
    CHECK(to_string(*kind) == name);
  }
  CHECK(is_directed(MeasureKind::meanmin));
  CHECK_FALSE(is_directed(MeasureKind::emd));
}
