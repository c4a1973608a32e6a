#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gridhull/error.hpp"
#include "gridhull/setdiff.hpp"

using namespace gridhull;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

VectorXd v2(double a, double b) { return Vector2d(a, b); }

Polyhedron box2(double x0, double y0, double x1, double y1) { return Polyhedron::box(v2(x0, y0), v2(x1, y1)); }

double area(const Polyhedron& P) {
  const auto vs = vertices_2d(P);
  double a = 0;
  for (size_t i = 0; i < vs.size(); ++i) {
    const auto& p = vs[i];
    const auto& q = vs[(i + 1) % vs.size()];
    a += p(0) * q(1) - q(0) * p(1);
  }
  return 0.5 * a;
}

}  // namespace

TEST_CASE("square minus itself is empty") {
  const Polyhedron S = box2(0, 0, 1, 1);
  const PolyUnion U = region_diff(S, {S});
  CHECK(U.empty());
  CHECK(U.disjoint_interiors);
  CHECK_FALSE(union_contains(U, v2(0.5, 0.5)));
}

TEST_CASE("square minus its left half is the right half") {
  const Polyhedron S = box2(0, 0, 1, 1);
  MatrixXd A(1, 2);
  A << 1, 0;
  const PolyUnion U = region_diff(S, {Polyhedron(A, VectorXd::Constant(1, 0.5))});
  REQUIRE(U.parts.size() == 1);
  CHECK(area(U.parts[0]) == doctest::Approx(0.5));
  CHECK(union_contains(U, v2(0.75, 0.5)));
  CHECK_FALSE(union_contains(U, v2(0.25, 0.5)));
}

TEST_CASE("empty removal list returns the set") {
  const Polyhedron S = box2(0, 0, 1, 1);
  const PolyUnion U = region_diff(S, {});
  REQUIRE(U.parts.size() == 1);
  CHECK(union_contains(U, v2(0.5, 0.5)));
}

TEST_CASE("unbounded input is rejected") {
  MatrixXd A(1, 2);
  A << 1, 0;
  CHECK_THROWS_AS(region_diff(Polyhedron(A, VectorXd::Ones(1)), {box2(0, 0, 1, 1)}), UnboundedError);
}

TEST_CASE("square minus a centered square") {
  const Polyhedron Y = box2(0, 0, 4, 4);
  const Polyhedron R = box2(1, 1, 3, 3);
  const PolyUnion U = region_diff(Y, {R});
  CHECK(U.parts.size() == 4);
  CHECK(U.disjoint_interiors);
  CHECK(check_disjoint_interiors(U));
  double total = 0;
  for (const auto& P : U.parts) total += area(P);
  CHECK(total == doctest::Approx(12.0));
  CHECK_FALSE(union_contains(U, v2(1.1, 1.1)));
  CHECK(union_contains(U, v2(0.5, 0.5)));
}

TEST_CASE("probe classification and disjointness with several removals") {
  const Polyhedron Y = box2(0, 0, 10, 10);
  MatrixXd A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  VectorXd b(3);
  b << -2, -2, 9;
  const std::vector<Polyhedron> R = {box2(1, 1, 4, 5), Polyhedron(A, b), box2(6, 0, 12, 3)};
  const PolyUnion U = region_diff(Y, R);
  CHECK(check_disjoint_interiors(U));
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0, 10);
  int mismatches = 0;
  for (int t = 0; t < 10000; ++t) {
    const VectorXd y = v2(u(rng), u(rng));
    bool removed = false, near = false;
    for (const auto& r : R) {
      removed = removed || contains(r, y, 0.0);
      near = near || (contains(r, y, 1e-6) != contains(r, y, -1e-6));
    }
    if (near) continue;
    mismatches += union_contains(U, y) == removed;
  }
  CHECK(mismatches == 0);
  for (const auto& P : U.parts) CHECK(chebyshev_center(P).radius >= kSliverRadius);
}

TEST_CASE("union_contains on simple unions") {
  const PolyUnion none{2, {}, true};
  CHECK_FALSE(union_contains(none, v2(0, 0)));
  const Polyhedron S = box2(0, 0, 1, 1);
  const PolyUnion one{2, {S}, true};
  CHECK(union_contains(one, v2(0.5, 0.5)) == contains(S, v2(0.5, 0.5)));
  CHECK(union_contains(one, v2(2, 2)) == contains(S, v2(2, 2)));
}

TEST_CASE("complement of a difference recovers the removed part") {
  const Polyhedron Y = box2(0, 0, 4, 4);
  const Polyhedron R = box2(1, 1, 3, 3);
  const PolyUnion U = region_diff(Y, {R});
  const PolyUnion back = region_diff(Y, U.parts);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0, 4);
  for (int t = 0; t < 2000; ++t) {
    const VectorXd y = v2(u(rng), u(rng));
    if (contains(R, y, 1e-3) != contains(R, y, -1e-3)) continue;
    CHECK(union_contains(back, y) == contains(R, y));
  }
}
