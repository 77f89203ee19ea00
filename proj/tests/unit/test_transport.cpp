#include <doctest.h>

#include "mind/transport.hpp"
#include "oracles.hpp"

using namespace mind;

namespace {

void check_plan(const TransportResult& r, const std::vector<double>& supply, const std::vector<double>& demand,
                const Eigen::MatrixXd& cost) {
  std::vector<double> out(supply.size(), 0.0);
  std::vector<double> in(demand.size(), 0.0);
  double c = 0.0;
  for (const Flow& f : r.plan.flows) {
    CHECK(f.mass >= 0.0);
    out[f.source] += f.mass;
    in[f.target] += f.mass;
    c += f.mass * cost(static_cast<Eigen::Index>(f.source), static_cast<Eigen::Index>(f.target));
  }
  for (std::size_t i = 0; i < supply.size(); ++i) CHECK(out[i] == doctest::Approx(supply[i]).epsilon(1e-12));
  for (std::size_t j = 0; j < demand.size(); ++j) CHECK(in[j] == doctest::Approx(demand[j]).epsilon(1e-12));
  CHECK(r.plan.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c == doctest::Approx(r.cost).epsilon(1e-12));
}

std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += (x = u(gen));
  for (double& x : v) x /= s;
  return v;
}

}  // namespace

TEST_CASE("1x1 transport moves everything along the only cell") {
  Eigen::MatrixXd c(1, 1);
  c << 2.5;
  const TransportResult r = solve_transport({1.0}, {1.0}, c);
  CHECK(r.cost == 2.5);
  REQUIRE(r.plan.flows.size() == 1);
  CHECK(r.plan.flows[0].mass == 1.0);
}

TEST_CASE("2x1 transport with unit costs") {
  Eigen::MatrixXd c(2, 1);
  c << 1, 1;
  const TransportResult r = solve_transport({0.5, 0.5}, {1.0}, c);
  CHECK(r.cost == doctest::Approx(1.0).epsilon(1e-15));
  check_plan(r, {0.5, 0.5}, {1.0}, c);
}

TEST_CASE("random transport problems match vertex enumeration") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 150; ++t) {
    const std::size_t m = 1 + gen() % 4;
    const std::size_t n = 1 + gen() % 4;
    const auto supply = random_simplex(gen, m);
    const auto demand = random_simplex(gen, n);
    Eigen::MatrixXd c(m, n);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(gen);
    const TransportResult r = solve_transport(supply, demand, c);
    CHECK(r.cost == doctest::Approx(oracle::transport_by_vertices(supply, demand, c)).epsilon(1e-9));
    CHECK(std::abs(r.cost - oracle::transport_by_vertices(supply, demand, c)) <= 1e-9);
    check_plan(r, supply, demand, c);
  }
}

TEST_CASE("degenerate problems with ties and equal partial sums") {
  // Uniform masses make partial sums coincide, which drives degenerate pivots.
  std::mt19937_64 gen(5);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + gen() % 3;
    const std::size_t n = 2 + gen() % 3;
    std::vector<double> s(m, 1.0 / static_cast<double>(m));
    std::vector<double> d(n, 1.0 / static_cast<double>(n));
    Eigen::MatrixXd c(m, n);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = static_cast<double>(gen() % 3);
    const TransportResult r = solve_transport(s, d, c);
    CHECK(std::abs(r.cost - oracle::transport_by_vertices(s, d, c)) <= 1e-9);
    check_plan(r, s, d, c);
  }
}

TEST_CASE("larger balanced integer problems stay exact") {
  std::mt19937_64 gen(8);
  const std::size_t m = 30;
  const std::size_t n = 20;
  // supplies n each, demands m each: the scaling the EMD path uses.
  std::vector<double> s(m, static_cast<double>(n));
  std::vector<double> d(n, static_cast<double>(m));
  Eigen::MatrixXd c(m, n);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(gen);
  const TransportResult r = solve_balanced_transport(s, d, c);
  for (const Flow& f : r.plan.flows) CHECK(f.mass == std::round(f.mass));

  // Optimality certificate: any 2x2 exchange along used cells cannot help.
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(m, n);
  for (const Flow& f : r.plan.flows) flow(f.source, f.target) = f.mass;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i) {
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k) {
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
        for (Eigen::Index l = 0; l < static_cast<Eigen::Index>(n); ++l) {
          if (flow(i, j) > 0 && flow(k, l) > 0) {
            CHECK(c(i, j) + c(k, l) <= c(i, l) + c(k, j) + 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("transport input errors") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS_WITH_AS(solve_transport({0.5, 0.4}, {0.5, 0.5}, c), doctest::Contains("unbalanced"), Error);
  CHECK_THROWS_AS(solve_transport({1.5, -0.5}, {0.5, 0.5}, c), Error);
  CHECK_THROWS_AS(solve_transport({0.5, 0.5}, {1.0}, c), Error);
}
