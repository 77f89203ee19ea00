#include <doctest.h>

#include <cstring>
#include <set>

#include "mind/dissim_space.hpp"
#include "mind/pointset.hpp"
#include "oracles.hpp"

using namespace mind;
using oracle::make_bag;

namespace {

MilDataset random_dataset(std::uint64_t seed, std::size_t bags, std::size_t dim) {
  std::mt19937_64 gen(seed);
  MilDataset ds;
  ds.dim = dim;
  for (std::size_t i = 0; i < bags; ++i) {
    ds.bags.push_back(oracle::random_bag(gen, 1 + gen() % 5, dim, "b" + std::to_string(i)));
    ds.bags.back().label = i % 2 ? Label::negative : Label::positive;
  }
  return ds;
}

bool bitwise_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("select_prototypes") {
  const MilDataset ds = random_dataset(1, 10, 2);
  const PrototypeSet all = select_prototypes(ds, PrototypeStrategy::all, 0, 0);
  REQUIRE(all.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(all.ids()[i] == ds.bags[i].id);

  const PrototypeSet r1 = select_prototypes(ds, PrototypeStrategy::random, 3, 42);
  const PrototypeSet r2 = select_prototypes(ds, PrototypeStrategy::random, 3, 42);
  CHECK(r1.ids() == r2.ids());
  CHECK(r1.size() == 3);
  const std::vector<std::string> picked = r1.ids();
  CHECK(std::set<std::string>(picked.begin(), picked.end()).size() == 3);

  const PrototypeSet every = select_prototypes(ds, PrototypeStrategy::random, 10, 7);
  CHECK(every.ids() == all.ids());

  CHECK_THROWS_AS(select_prototypes(ds, PrototypeStrategy::random, 11, 0), Error);
}

TEST_CASE("compute_matrix entries equal direct measure calls") {
  SUBCASE("one bag against itself") {
    MilDataset one{{make_bag("a", {{0, 1}, {3, 2}})}, 2};
    const DissimMatrix m = compute_matrix(one, select_prototypes(one, PrototypeStrategy::all, 0, 0),
                                          MeasureSpec{MeasureKind::meanmin});
    REQUIRE(m.values.rows() == 1);
    CHECK(m.values(0, 0) == 0.0);
  }
  SUBCASE("3 bags x 2 prototypes, minmin") {
    const MilDataset ds = random_dataset(2, 3, 2);
    PrototypeSet protos;
    protos.bags = {ds.bags[0], ds.bags[2]};
    const DissimMatrix m = compute_matrix(ds, protos, MeasureSpec{MeasureKind::minmin});
    REQUIRE(m.values.rows() == 3);
    REQUIRE(m.values.cols() == 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) {
        CHECK(m.values(i, j) == oracle::pointset_all(ds.bags[static_cast<std::size_t>(i)],
                                                     protos.bags[static_cast<std::size_t>(j)])
                                    .minmin);
      }
    }
    CHECK(m.row_ids == std::vector<std::string>{"b0", "b1", "b2"});
    CHECK(m.col_ids == std::vector<std::string>{"b0", "b2"});
  }
  SUBCASE("directed measure with symmetrization") {
    const MilDataset ds = random_dataset(3, 6, 3);
    const PrototypeSet protos = select_prototypes(ds, PrototypeStrategy::all, 0, 0);
    MatrixOptions opt;
    opt.symmetrization = SymmetrizationMode::average;
    const DissimMatrix m = compute_matrix(ds, protos, MeasureSpec{MeasureKind::meanmin}, opt);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        const auto& a = ds.bags[static_cast<std::size_t>(i)];
        const auto& b = ds.bags[static_cast<std::size_t>(j)];
        CHECK(m.values(i, j) == 0.5 * (pointset_dissim(a, b, PointSetMeasure::meanmin) +
                                       pointset_dissim(b, a, PointSetMeasure::meanmin)));
      }
    }
    CHECK(m.values == m.values.transpose());
  }
}

TEST_CASE("symmetric measure with all prototypes gives zero diagonal and D = D^T") {
  const MilDataset ds = random_dataset(4, 8, 2);
  const DissimMatrix m = compute_matrix(ds, select_prototypes(ds, PrototypeStrategy::all, 0, 0),
                                        MeasureSpec{MeasureKind::hausdorff});
  CHECK(m.values.diagonal().isZero(0.0));
  CHECK(m.values == m.values.transpose());
}

TEST_CASE("compute_matrix is bitwise independent of the thread count") {
  const MilDataset ds = random_dataset(5, 23, 3);
  const PrototypeSet protos = select_prototypes(ds, PrototypeStrategy::all, 0, 0);
  for (MeasureKind kind : {MeasureKind::meanmin, MeasureKind::emd, MeasureKind::cs, MeasureKind::mahalanobis}) {
    MatrixOptions opt;
    opt.symmetrization = SymmetrizationMode::average;
    const DissimMatrix one = compute_matrix(ds, protos, MeasureSpec{kind}, opt);
    for (unsigned threads : {2u, 3u, 8u, 64u}) {
      opt.threads = threads;
      CHECK(bitwise_equal(one.values, compute_matrix(ds, protos, MeasureSpec{kind}, opt).values));
    }
  }
}

TEST_CASE("compute_matrix annotates measure errors with the pair") {
  MilDataset ds{{make_bag("big", std::vector<Instance>(5, Instance{0.0})), make_bag("tiny", {{1.0}})}, 1};
  MeasureSpec spec{MeasureKind::emd};
  spec.emd_max_instances = 2;
  MatrixOptions opt;
  opt.threads = 2;
  CHECK_THROWS_WITH_AS(compute_matrix(ds, select_prototypes(ds, PrototypeStrategy::all, 0, 0), spec, opt),
                       doctest::Contains("[bag big, prototype"), Error);
}

TEST_CASE("build_representation modes") {
  const MilDataset ds{{make_bag("B1", {{0, 0}, {1, 0}}, Label::positive), make_bag("B2", {{2, 0}}, Label::negative)},
                      2};
  const PrototypeSet protos = select_prototypes(ds, PrototypeStrategy::all, 0, 0);
  MatrixOptions opt;
  const DissimMatrix to = compute_matrix(ds, protos, MeasureSpec{MeasureKind::meanmin}, opt);
  opt.direction = Direction::from;
  const DissimMatrix from = compute_matrix(ds, protos, MeasureSpec{MeasureKind::meanmin}, opt);

  const FeatureTable t_to = build_representation(to, from, RepresentationMode::to, labels_of(ds));
  const FeatureTable t_from = build_representation(to, from, RepresentationMode::from, labels_of(ds));
  const FeatureTable t_ext = build_representation(to, from, RepresentationMode::extended, labels_of(ds));
  // Row B1, prototype B2.
  CHECK(t_to.values(0, 1) == 2.5);
  CHECK(t_from.values(0, 1) == 1.0);
  CHECK(t_ext.cols() == 4);
  CHECK(t_ext.values(0, 1) == 2.5);
  CHECK(t_ext.values(0, 3) == 1.0);
  CHECK(t_to.columns[1] == "meanmin:B2");
  CHECK(t_from.columns[1] == "meanmin:B2:from");
  CHECK(t_ext.columns[0] == "meanmin:B1:to");
  CHECK(t_ext.columns[3] == "meanmin:B2:from");
  CHECK(t_to.labels[0] == Label::positive);

  SUBCASE("extended over five prototypes has ten columns") {
    const MilDataset five = random_dataset(6, 5, 2);
    const PrototypeSet p5 = select_prototypes(five, PrototypeStrategy::all, 0, 0);
    MatrixOptions o;
    const DissimMatrix a = compute_matrix(five, p5, MeasureSpec{MeasureKind::maxmin}, o);
    o.direction = Direction::from;
    const DissimMatrix b = compute_matrix(five, p5, MeasureSpec{MeasureKind::maxmin}, o);
    CHECK(build_representation(a, b, RepresentationMode::extended).cols() == 10);
  }
  SUBCASE("symmetric measure: to and from tables agree") {
    MatrixOptions o;
    const DissimMatrix a = compute_matrix(ds, protos, MeasureSpec{MeasureKind::hausdorff}, o);
    o.direction = Direction::from;
    const DissimMatrix b = compute_matrix(ds, protos, MeasureSpec{MeasureKind::hausdorff}, o);
    CHECK(build_representation(a, b, RepresentationMode::to).values ==
          build_representation(a, b, RepresentationMode::from).values);
  }
  SUBCASE("id mismatch") {
    DissimMatrix other = from;
    other.col_ids[0] = "elsewhere";
    CHECK_THROWS_AS(build_representation(to, other, RepresentationMode::extended), Error);
    CHECK_THROWS_AS(build_representation(to, std::nullopt, RepresentationMode::from), Error);
  }
}

TEST_CASE("test rows need no labels") {
  MilDataset ds = random_dataset(7, 6, 2);
  const MilDataset unlabeled = strip_labels(ds);
  const PrototypeSet protos = select_prototypes(ds, PrototypeStrategy::all, 0, 0);
  const DissimMatrix a = compute_matrix(ds, protos, MeasureSpec{MeasureKind::meanmin});
  const DissimMatrix b = compute_matrix(unlabeled, protos, MeasureSpec{MeasureKind::meanmin});
  CHECK(bitwise_equal(a.values, b.values));
  const FeatureTable t = build_representation(b, std::nullopt, RepresentationMode::to, labels_of(unlabeled));
  for (Label l : t.labels) CHECK(l == Label::unknown);
}
