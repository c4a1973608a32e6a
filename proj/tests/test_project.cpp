#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "gridhull/capacity.hpp"
#include "gridhull/casefmt.hpp"
#include "gridhull/error.hpp"
#include "gridhull/project.hpp"

using namespace gridhull;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

NetworkModel load(const std::string& name) {
  return parse_network_json(read_file(std::string(GRIDHULL_DATA_DIR) + "/" + name));
}

AggregationMap six_agg(const NetworkModel& net) {
  return parse_aggregation(read_file(std::string(GRIDHULL_DATA_DIR) + "/sixbus_agg.json"), net);
}

Polyhedron unit_square() { return Polyhedron::box(VectorXd::Zero(2), VectorXd::Ones(2)); }

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

// feasible({x in P : T x = y})
bool fiber_feasible(const Polyhedron& P, const MatrixXd& T, const VectorXd& y) {
  Polyhedron F = P;
  for (Eigen::Index j = 0; j < T.rows(); ++j) F = F.with_equality(T.row(j), y(j));
  return !is_empty(F);
}

double signed_dist(const Polyhedron& P, const VectorXd& y) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < P.num_ineq(); ++i) {
    const double nr = P.A().row(i).norm();
    if (nr > 0) worst = std::max(worst, (P.A().row(i).dot(y) - P.b()(i)) / nr);
  }
  return worst;
}

}  // namespace

TEST_CASE("aggregation map construction") {
  const AggregationMap T = AggregationMap::from_assignment({0, 1, 1, 1, 1, 2}, 3);
  const MatrixXd M = T.matrix();
  CHECK(M.rows() == 3);
  CHECK(M.colwise().sum().isOnes());
  CHECK(T.members(1) == std::vector<Eigen::Index>{1, 2, 3, 4});
  CHECK_THROWS_AS(AggregationMap::from_assignment({0, 0, 2}, 3), InputError);
  CHECK_THROWS_AS(AggregationMap::from_assignment({0, 3}, 3), InputError);
}

TEST_CASE("apply_map sums injections per region") {
  const AggregationMap T = AggregationMap::from_assignment({0, 1, 1, 1, 1, 2}, 3);
  const VectorXd y = apply_map(T, vec({3, 0, 0, 3, 0, -6}));
  CHECK((y - vec({3, 3, -6})).norm() == 0.0);
  const AggregationMap id = AggregationMap::identity(4);
  const VectorXd x = vec({1, -2, 3, -2});
  CHECK(apply_map(id, x) == x);
  const AggregationMap one = AggregationMap::from_assignment({0, 0, 0, 0}, 1);
  CHECK(apply_map(one, x)(0) == 0.0);
  CHECK_THROWS_AS(apply_map(T, x), InputError);
}

TEST_CASE("image of the unit square under the coordinate sum is [0, 2]") {
  MatrixXd M(1, 2);
  M << 1, 1;
  const Polyhedron I = image_exact(unit_square(), M);
  CHECK(I.dim() == 1);
  CHECK(support(I, vec({1})).value == doctest::Approx(2.0));
  CHECK(support(I, vec({-1})).value == doctest::Approx(0.0));
}

TEST_CASE("image under a permutation is the set itself") {
  const Polyhedron B = Polyhedron::box(vec({0, -1, 2}), vec({1, 1, 5}));
  MatrixXd P = MatrixXd::Zero(3, 3);
  P(0, 2) = P(1, 0) = P(2, 1) = 1;
  const Polyhedron I = image_exact(B, P);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-2, 6);
  for (int t = 0; t < 500; ++t) {
    const VectorXd x = vec({u(rng), u(rng), u(rng)});
    CHECK(contains(I, P * x) == contains(B, x));
  }
}

TEST_CASE("image with an identity aggregation") {
  const Polyhedron B = Polyhedron::box(vec({0, -1}), vec({1, 1}));
  const Polyhedron I = image_exact(B, AggregationMap::identity(2));
  CHECK(remove_redundancy(I).num_ineq() == 4);
}

TEST_CASE("six-bus exact PLt agrees with the fiber oracle") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = six_agg(net);
  const Polyhedron PGL = intersect(generator_polyhedron(net), line_polyhedron(net));
  const Polyhedron PLt = image_exact(PGL, agg);
  const MatrixXd T = agg.matrix();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> un(-3000, 7000), us(-6000, -3000);
  int mismatches = 0, inside = 0;
  for (int t = 0; t < 1000; ++t) {
    const double n = un(rng), s = us(rng);
    const VectorXd y = vec({n, -n - s, s});
    const bool in = contains(PLt, y);
    inside += in;
    if (in != fiber_feasible(PGL, T, y) && std::abs(signed_dist(PLt, y)) > 1e-6) ++mismatches;
  }
  CHECK(mismatches == 0);
  CHECK(inside > 50);
  CHECK(inside < 950);
}

TEST_CASE("images of balanced sets carry the balance equality") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = six_agg(net);
  const Polyhedron PLt = image_exact(intersect(generator_polyhedron(net), line_polyhedron(net)), agg);
  const VectorXd ones = VectorXd::Ones(3);
  CHECK(std::abs(support(PLt, ones).value) < 1e-6);
  CHECK(std::abs(support(PLt, -ones).value) < 1e-6);
}

TEST_CASE("row cap raises a resource error") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = six_agg(net);
  const Polyhedron PGL = intersect(generator_polyhedron(net), line_polyhedron(net));
  CHECK_THROWS_AS(image_exact(PGL, agg, 5), ResourceError);
}

TEST_CASE("row cap is read from the environment") {
  ::setenv("GRIDHULL_ROW_CAP", "123", 1);
  CHECK(default_row_cap() == 123);
  ::unsetenv("GRIDHULL_ROW_CAP");
  CHECK(default_row_cap() == 100000);
}

TEST_CASE("approximation of the unit square with the four axes") {
  ApproxOptions opt;
  opt.budget = 4;
  const ApproxSet a = image_approx(unit_square(), AggregationMap::identity(2), opt);
  CHECK(a.directions.size() == 4);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int t = 0; t < 500; ++t) {
    const VectorXd y = vec({u(rng), u(rng)});
    CHECK(contains(a.outer, y) == contains(unit_square(), y));
  }
}

TEST_CASE("approximation of a segment image is exact after two directions") {
  const PolyhedronImageOracle oracle(unit_square(), (MatrixXd(1, 2) << 1, 1).finished());
  ApproxOptions opt;
  opt.budget = 8;
  const ApproxSet a = image_approx(oracle, opt);
  CHECK(a.directions.size() == 2);
  CHECK(a.gap == doctest::Approx(0.0));
  CHECK(support(a.outer, vec({1})).value == doctest::Approx(2.0));
  CHECK(support(a.outer, vec({-1})).value == doctest::Approx(0.0));
  REQUIRE(a.has_inner_hrep);
  CHECK(support(a.inner, vec({1})).value == doctest::Approx(2.0));
}

TEST_CASE("unbounded image reports the direction") {
  MatrixXd A(1, 2);
  A << 1, 0;
  CHECK_THROWS_AS(image_approx(Polyhedron(A, VectorXd::Ones(1)), AggregationMap::identity(2)), UnboundedError);
}

TEST_CASE("six-bus approximation matches the exact image") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = six_agg(net);
  const Polyhedron PGL = intersect(generator_polyhedron(net), line_polyhedron(net));
  const Polyhedron exact = image_exact(PGL, agg);
  ApproxOptions opt;
  opt.budget = 64;
  const ApproxSet a = image_approx(PGL, agg, opt);
  CHECK(a.gap <= 1.0);
  CHECK(a.gap >= 0.0);
  const MatrixXd T = agg.matrix();
  for (const auto& v : a.inner_vertices) {
    CHECK(contains(a.outer, v));
    CHECK(fiber_feasible(PGL, T, v));
  }
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> un(-3000, 7000), us(-6000, -3000);
  for (int t = 0; t < 1000; ++t) {
    const double n = un(rng), s = us(rng);
    const VectorXd y = vec({n, -n - s, s});
    if (contains(exact, y, -1e-3)) CHECK(contains(a.outer, y));
    REQUIRE(a.has_inner_hrep);
    if (contains(a.inner, y, -1e-3)) CHECK(contains(exact, y));
  }
  // Every outer halfspace is tight for the exact image.
  for (Eigen::Index i = 0; i < a.outer.num_ineq(); ++i)
    CHECK(support(exact, a.outer.A().row(i).transpose()).value == doctest::Approx(a.outer.b()(i)).epsilon(1e-9));
}

TEST_CASE("approximation is deterministic for a fixed seed") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = six_agg(net);
  const Polyhedron PGL = intersect(generator_polyhedron(net), line_polyhedron(net));
  ApproxOptions opt;
  opt.budget = 20;
  opt.refine = false;
  const ApproxSet a = image_approx(PGL, agg, opt), b = image_approx(PGL, agg, opt);
  REQUIRE(a.directions.size() == b.directions.size());
  for (size_t i = 0; i < a.directions.size(); ++i) CHECK(a.directions[i] == b.directions[i]);
}

TEST_CASE("gap shrinks with the budget") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = six_agg(net);
  const Polyhedron PGL = intersect(generator_polyhedron(net), line_polyhedron(net));
  double prev = std::numeric_limits<double>::infinity();
  for (int budget : {8, 12, 16, 24, 32, 64}) {
    ApproxOptions opt;
    opt.budget = budget;
    opt.tol = 1e-9;
    const ApproxSet a = image_approx(PGL, agg, opt);
    CHECK(a.gap <= prev + 1e-6);
    prev = a.gap;
  }
}

TEST_CASE("gap estimate of identical and nested sets") {
  ApproxSet a;
  a.dim = 2;
  a.outer = unit_square();
  a.inner_vertices = {vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1})};
  a.inner = hull_hrep(a.inner_vertices, 2);
  a.has_inner_hrep = true;
  CHECK(gap_estimate(a) == doctest::Approx(0.0));

  // Square [-1,1]^2 around the inscribed diamond: zero on the axis normals,
  // sqrt(2) - 1/sqrt(2) on the diamond normals.
  a.outer = Polyhedron::box(vec({-1, -1}), vec({1, 1}));
  a.inner_vertices = {vec({1, 0}), vec({0, 1}), vec({-1, 0}), vec({0, -1})};
  a.inner = hull_hrep(a.inner_vertices, 2);
  CHECK(gap_estimate(a) == doctest::Approx(std::sqrt(2.0) - 1.0 / std::sqrt(2.0)));
  a.has_inner_hrep = false;
  CHECK(gap_estimate(a) == doctest::Approx(0.0));
  a.inner_vertices.clear();
  CHECK_THROWS_AS(gap_estimate(a), InputError);
}

TEST_CASE("hull_hrep of low-dimensional clouds") {
  const Polyhedron tri = hull_hrep({vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0})}, 3);
  CHECK(tri.num_eq() == 1);
  CHECK(contains(tri, vec({0.2, 0.2, 0})));
  CHECK_FALSE(contains(tri, vec({0.6, 0.6, 0})));
  CHECK_FALSE(contains(tri, vec({0.2, 0.2, 0.1})));
  std::vector<VectorXd> simplex4;
  for (int i = 0; i < 4; ++i) simplex4.push_back(VectorXd::Unit(4, i));
  simplex4.push_back(VectorXd::Zero(4));
  CHECK_THROWS_AS(hull_hrep(simplex4, 4), InputError);
}
