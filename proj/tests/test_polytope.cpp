#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gridhull/error.hpp"
#include "gridhull/polytope.hpp"

using namespace gridhull;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

Polyhedron unit_square() { return Polyhedron::box(VectorXd::Zero(2), VectorXd::Ones(2)); }

VectorXd v2(double a, double b) { return Vector2d(a, b); }

// Signed area of a CCW polygon.
double shoelace(const std::vector<VectorXd>& vs) {
  double a = 0;
  for (size_t i = 0; i < vs.size(); ++i) {
    const auto& p = vs[i];
    const auto& q = vs[(i + 1) % vs.size()];
    a += p(0) * q(1) - q(0) * p(1);
  }
  return 0.5 * a;
}

// H-rep of a CCW polygon from its vertices.
Polyhedron from_vertices(const std::vector<VectorXd>& vs) {
  MatrixXd A(vs.size(), 2);
  VectorXd b(vs.size());
  for (size_t i = 0; i < vs.size(); ++i) {
    const VectorXd e = vs[(i + 1) % vs.size()] - vs[i];
    A.row(i) << e(1), -e(0);
    b(i) = A.row(i).dot(vs[i]);
  }
  return Polyhedron(A, b);
}

// Random polygon as 50 tangent lines of the unit circle, plus a box.
Polyhedron tangent_polygon(std::mt19937& rng, int lines) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  MatrixXd A(lines, 2);
  VectorXd b = VectorXd::Ones(lines);
  for (int i = 0; i < lines; ++i) {
    const double t = ang(rng);
    A.row(i) << std::cos(t), std::sin(t);
  }
  return intersect(Polyhedron(A, b), Polyhedron::box(VectorXd::Constant(2, -3), VectorXd::Constant(2, 3)));
}

}  // namespace

TEST_CASE("contains on the unit square") {
  const Polyhedron S = unit_square();
  CHECK(contains(S, v2(0.5, 0.5)));
  CHECK_FALSE(contains(S, v2(1 + 2 * kMembershipTol, 0)));
  CHECK(contains(S, v2(1 + 0.5 * kMembershipTol, 0)));
  CHECK_THROWS_AS(contains(S, VectorXd::Zero(3)), InputError);
}

TEST_CASE("contains normalizes rows") {
  MatrixXd A(1, 2);
  A << 1000.0, 0.0;
  const Polyhedron P(A, VectorXd::Constant(1, 1000.0));
  CHECK(contains(P, v2(1 + 0.5e-6, 0)));
  CHECK_FALSE(contains(P, v2(1 + 2e-6, 0)));
}

TEST_CASE("contains honors equalities") {
  MatrixXd E(1, 2);
  E << 1, 1;
  const Polyhedron P = unit_square().with_equality(E.row(0), 1.0);
  CHECK(contains(P, v2(0.3, 0.7)));
  CHECK_FALSE(contains(P, v2(0.3, 0.3)));
}

TEST_CASE("is_empty") {
  MatrixXd A(2, 1);
  A << 1, -1;
  VectorXd b(2);
  b << 0, -1;
  CHECK(is_empty(Polyhedron(A, b)));
  CHECK_FALSE(is_empty(unit_square()));
  CHECK(is_empty(Polyhedron::empty(3)));
  CHECK_FALSE(is_empty(Polyhedron::universe(2)));
}

TEST_CASE("intersect of squares is a rectangle") {
  const Polyhedron Q = Polyhedron::box(v2(0.5, 0), v2(1.5, 1));
  const Polyhedron R = remove_redundancy(intersect(unit_square(), Q));
  const auto vs = vertices_2d(R);
  REQUIRE(vs.size() == 4);
  CHECK(shoelace(vs) == doctest::Approx(0.5));
  CHECK(R.num_ineq() == 4);
}

TEST_CASE("intersect equals conjunction of memberships") {
  std::mt19937 rng(7);
  const Polyhedron P = tangent_polygon(rng, 12);
  const Polyhedron Q = tangent_polygon(rng, 12);
  const Polyhedron PQ = intersect(P, Q);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const VectorXd y = v2(u(rng), u(rng));
    CHECK(contains(PQ, y) == (contains(P, y) && contains(Q, y)));
  }
  CHECK_THROWS_AS(intersect(P, Polyhedron::universe(3)), InputError);
}

TEST_CASE("P intersect P equals P up to redundancy") {
  const Polyhedron S = unit_square();
  const Polyhedron R = remove_redundancy(intersect(S, S));
  CHECK(R.num_ineq() == 4);
}

TEST_CASE("remove_redundancy drops weaker and duplicate rows") {
  MatrixXd A(2, 1);
  A << 1, 1;
  VectorXd b(2);
  b << 1, 2;
  const Polyhedron R = remove_redundancy(Polyhedron(A, b));
  REQUIRE(R.num_ineq() == 1);
  CHECK(R.b()(0) / R.A()(0, 0) == doctest::Approx(1.0));

  MatrixXd D(3, 1);
  D << 1, 2, -1;
  VectorXd f(3);
  f << 1, 2, 0;
  CHECK(remove_redundancy(Polyhedron(D, f)).num_ineq() == 2);
}

TEST_CASE("remove_redundancy of an empty set is canonical") {
  MatrixXd A(2, 1);
  A << 1, -1;
  VectorXd b(2);
  b << 0, -1;
  const Polyhedron R = remove_redundancy(Polyhedron(A, b));
  CHECK(is_empty(R));
  CHECK(R.num_ineq() == 1);
  CHECK(R.A().norm() == 0.0);
}

TEST_CASE("remove_redundancy preserves the set, is irredundant and idempotent") {
  std::mt19937 rng(11);
  const Polyhedron P = tangent_polygon(rng, 50);
  const Polyhedron R = remove_redundancy(P);
  CHECK(R.num_ineq() <= P.num_ineq());
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  for (int i = 0; i < 1000; ++i) {
    const VectorXd y = v2(u(rng), u(rng));
    CHECK(contains(P, y) == contains(R, y));
  }
  for (Eigen::Index r = 0; r < R.num_ineq(); ++r) {
    std::vector<Eigen::Index> keep;
    MatrixXd A(R.num_ineq() - 1, 2);
    VectorXd b(R.num_ineq() - 1);
    for (Eigen::Index k = 0, j = 0; k < R.num_ineq(); ++k) {
      if (k == r) continue;
      A.row(j) = R.A().row(k);
      b(j++) = R.b()(k);
    }
    const SupportResult s = support(Polyhedron(A, b), R.A().row(r).transpose());
    CHECK((s.status == lp::Status::Unbounded || s.value > R.b()(r) + 1e-9));
  }
  CHECK(remove_redundancy(R).num_ineq() == R.num_ineq());
}

TEST_CASE("support on the unit square") {
  const Polyhedron S = unit_square();
  const SupportResult a = support(S, v2(1, 0));
  REQUIRE(a.status == lp::Status::Optimal);
  CHECK(a.value == doctest::Approx(1.0));
  const SupportResult b = support(S, v2(1, 1));
  CHECK(b.value == doctest::Approx(2.0));
  CHECK((b.maximizer - v2(1, 1)).norm() < 1e-9);
  CHECK(support(Polyhedron::universe(2), v2(1, 0)).status == lp::Status::Unbounded);
  CHECK(support(Polyhedron::empty(2), v2(1, 0)).status == lp::Status::Infeasible);
}

TEST_CASE("support is sublinear") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const Polyhedron P = tangent_polygon(rng, 10);
    const VectorXd d1 = v2(g(rng), g(rng)), d2 = v2(g(rng), g(rng));
    CHECK(support(P, d1 + d2).value <= support(P, d1).value + support(P, d2).value + 1e-7);
  }
}

TEST_CASE("chebyshev center of the unit square") {
  const Ball c = chebyshev_center(unit_square());
  CHECK((c.center - v2(0.5, 0.5)).norm() < 1e-9);
  CHECK(c.radius == doctest::Approx(0.5));
}

TEST_CASE("chebyshev center of a segment is measured along the segment") {
  MatrixXd E(1, 2);
  E << 1, 1;
  const Polyhedron seg = unit_square().with_equality(E.row(0), 1.0);
  const Ball c = chebyshev_center(seg);
  CHECK((c.center - v2(0.5, 0.5)).norm() < 1e-9);
  CHECK(c.radius == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("chebyshev center errors") {
  CHECK_THROWS_AS(chebyshev_center(Polyhedron::empty(2)), InputError);
  MatrixXd A(1, 2);
  A << 1, 0;
  CHECK_THROWS_AS(chebyshev_center(Polyhedron(A, VectorXd::Ones(1))), UnboundedError);
}

TEST_CASE("vertices_2d of the unit square are CCW") {
  const auto vs = vertices_2d(unit_square());
  REQUIRE(vs.size() == 4);
  CHECK(shoelace(vs) == doctest::Approx(1.0));
  for (size_t i = 0; i < vs.size(); ++i) CHECK((vs[i] - vs[(i + 1) % 4]).norm() > 1e-8);
}

TEST_CASE("vertices_2d of a triangle from three halfplanes") {
  MatrixXd A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  VectorXd b(3);
  b << 0, 0, 1;
  const auto vs = vertices_2d(Polyhedron(A, b));
  REQUIRE(vs.size() == 3);
  CHECK(shoelace(vs) == doctest::Approx(0.5));
  for (const VectorXd& corner : {v2(0, 0), v2(1, 0), v2(0, 1)}) {
    bool found = false;
    for (const auto& v : vs) found = found || (v - corner).norm() < 1e-9;
    CHECK(found);
  }
}

TEST_CASE("vertices_2d handles a 2D set embedded in 3D") {
  const Polyhedron cube = Polyhedron::box(VectorXd::Zero(3), VectorXd::Ones(3));
  MatrixXd E(1, 3);
  E << 0, 0, 1;
  const auto vs = vertices_2d(cube.with_equality(E.row(0), 0.5));
  CHECK(vs.size() == 4);
  for (const auto& v : vs) CHECK(v(2) == doctest::Approx(0.5));
}

TEST_CASE("vertices_2d errors") {
  CHECK_THROWS(vertices_2d(Polyhedron::box(VectorXd::Zero(3), VectorXd::Ones(3))));
  MatrixXd A(1, 2);
  A << 1, 0;
  CHECK_THROWS(vertices_2d(Polyhedron(A, VectorXd::Ones(1))));
}

TEST_CASE("vertices_2d round trip classifies probes identically") {
  std::mt19937 rng(5);
  const Polyhedron P = tangent_polygon(rng, 30);
  const Polyhedron Q = from_vertices(vertices_2d(P));
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const VectorXd y = v2(u(rng), u(rng));
    mismatches += contains(P, y, 1e-6) != contains(Q, y, 1e-6);
  }
  CHECK(mismatches == 0);
}

TEST_CASE("affine frame parametrizes the equalities") {
  MatrixXd E(1, 3);
  E << 1, 1, 1;
  const Polyhedron P = Polyhedron::universe(3).with_equality(E.row(0), 3.0);
  const AffineFrame fr = affine_frame(P);
  CHECK(fr.basis.cols() == 2);
  CHECK((fr.basis.transpose() * fr.basis - MatrixXd::Identity(2, 2)).norm() < 1e-12);
  CHECK(E.row(0).dot(fr.origin) == doctest::Approx(3.0));
  CHECK((E * fr.basis).norm() < 1e-12);
}

TEST_CASE("interior overlap tests") {
  const Polyhedron S = unit_square();
  CHECK(interiors_overlap(S, Polyhedron::box(v2(0.5, 0.5), v2(2, 2))));
  CHECK_FALSE(interiors_overlap(S, Polyhedron::box(v2(1, 0), v2(2, 1))));
  PolyUnion U{2, {S, Polyhedron::box(v2(1, 0), v2(2, 1))}, true};
  CHECK(check_disjoint_interiors(U));
  U.parts.push_back(Polyhedron::box(v2(0.5, 0.5), v2(1.5, 1)));
  CHECK_FALSE(check_disjoint_interiors(U));
}

TEST_CASE("construction rejects inconsistent dimensions") {
  CHECK_THROWS_AS(Polyhedron(MatrixXd::Zero(2, 2), VectorXd::Zero(3)), InputError);
  CHECK_THROWS_AS(Polyhedron(MatrixXd::Zero(1, 2), VectorXd::Zero(1), MatrixXd::Zero(1, 3), VectorXd::Zero(1)),
                  InputError);
}
