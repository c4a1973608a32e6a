#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <limits>
#include <random>

#include "gridhull/error.hpp"
#include "gridhull/lpsolve.hpp"

using namespace gridhull;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

lp::LpProblem one_dim(double c) {
  auto p = lp::LpProblem::with_dim(1);
  p.objective << c;
  return p;
}

void add_ineq(lp::LpProblem& p, std::initializer_list<double> a, double b) {
  const auto r = p.A.rows();
  p.A.conservativeResize(r + 1, p.dim());
  p.b.conservativeResize(r + 1);
  Eigen::Index j = 0;
  for (double v : a) p.A(r, j++) = v;
  p.b(r) = b;
}

void add_eq(lp::LpProblem& p, std::initializer_list<double> a, double f) {
  const auto r = p.E.rows();
  p.E.conservativeResize(r + 1, p.dim());
  p.f.conservativeResize(r + 1);
  Eigen::Index j = 0;
  for (double v : a) p.E(r, j++) = v;
  p.f(r) = f;
}

// Random bounded, feasible LP: a box |x_j| <= 10 plus random rows with slack
// at a random interior point, optionally with equality rows through it.
lp::LpProblem random_lp(std::mt19937& rng, int n, int m, int q) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0(j) = 3.0 * u(rng);
  auto p = lp::LpProblem::with_dim(n);
  for (int j = 0; j < n; ++j) p.objective(j) = u(rng);
  p.A.resize(m + 2 * n, n);
  p.b.resize(m + 2 * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) p.A(i, j) = u(rng);
    p.b(i) = p.A.row(i).dot(x0) + 0.5 + std::abs(u(rng));
  }
  p.A.bottomRows(2 * n) << MatrixXd::Identity(n, n), -MatrixXd::Identity(n, n);
  p.b.tail(2 * n).setConstant(10.0);
  p.E.resize(q, n);
  p.f.resize(q);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < n; ++j) p.E(i, j) = u(rng);
    p.f(i) = p.E.row(i).dot(x0);
  }
  return p;
}

// Dual of  max c·x  s.t. A x <= b, E x = f  (x free):
//   min b·u + f·v  s.t. Aᵀu + Eᵀv = c, u >= 0, v free.
lp::LpProblem dual_of(const lp::LpProblem& p) {
  const auto m = p.A.rows();
  const auto q = p.E.rows();
  auto d = lp::LpProblem::with_dim(m + q);
  d.sense = lp::Sense::Minimize;
  d.objective << p.b, p.f;
  d.E.resize(p.dim(), m + q);
  d.E << p.A.transpose(), p.E.transpose();
  d.f = p.objective;
  d.A = MatrixXd::Zero(m, m + q);
  d.A.leftCols(m) = -MatrixXd::Identity(m, m);
  d.b = VectorXd::Zero(m);
  return d;
}

}  // namespace

TEST_CASE("single active constraint") {
  auto p = one_dim(1.0);
  add_ineq(p, {1.0}, 5.0);
  const auto r = lp::solve(p);
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.value == doctest::Approx(5.0));
  CHECK((*r.point)(0) == doctest::Approx(5.0));
}

TEST_CASE("contradictory bounds are infeasible") {
  auto p = one_dim(1.0);
  add_ineq(p, {-1.0}, -1.0);
  add_ineq(p, {1.0}, 0.0);
  CHECK(lp::solve(p).status == lp::Status::Infeasible);
  CHECK_FALSE(lp::feasible(p));
}

TEST_CASE("equality forces the value") {
  auto p = lp::LpProblem::with_dim(2);
  p.objective << 1.0, 1.0;
  add_ineq(p, {1.0, 0.0}, 2.0);
  add_ineq(p, {0.0, 1.0}, 3.0);
  add_eq(p, {1.0, 1.0}, 4.0);
  const auto r = lp::solve(p);
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(4.0));
  CHECK(r.point->sum() == doctest::Approx(4.0));
  CHECK(lp::max_violation(p, *r.point) <= lp::kFeasTol);
}

TEST_CASE("unbounded is reported, not clipped") {
  auto p = one_dim(1.0);
  add_ineq(p, {-1.0}, 0.0);
  CHECK(lp::solve(p).status == lp::Status::Unbounded);
  auto q = one_dim(1.0);
  q.sense = lp::Sense::Minimize;
  add_ineq(q, {1.0}, 3.0);
  CHECK(lp::solve(q).status == lp::Status::Unbounded);
}

TEST_CASE("feasibility examples") {
  auto p = one_dim(0.0);
  add_ineq(p, {1.0}, 1.0);
  add_ineq(p, {-1.0}, 0.0);
  CHECK(lp::feasible(p));

  auto q = one_dim(0.0);
  add_ineq(q, {1.0}, -1.0);
  add_ineq(q, {-1.0}, 0.0);
  CHECK_FALSE(lp::feasible(q));

  // Six injections with generator boxes (GW) and balance. The hand-built
  // dispatch (3, 0, 0, 3, 0, -6) satisfies every bound, so the set is nonempty.
  const VectorXd demand = (VectorXd(6) << 3, 3, 3, 3, 3, 6).finished();
  const VectorXd gmax = (VectorXd(6) << 10, 3, 3, 10, 3, 3).finished();
  auto s = lp::LpProblem::with_dim(6);
  s.A.resize(12, 6);
  s.A << MatrixXd::Identity(6, 6), -MatrixXd::Identity(6, 6);
  s.b.resize(12);
  s.b << gmax - demand, demand;
  s.E = MatrixXd::Ones(1, 6);
  s.f = VectorXd::Zero(1);
  const VectorXd witness = (VectorXd(6) << 3, 0, 0, 3, 0, -6).finished();
  CHECK(lp::max_violation(s, witness) == 0.0);
  CHECK(lp::feasible(s));
}

TEST_CASE("malformed dimensions are input errors") {
  auto p = lp::LpProblem::with_dim(2);
  p.A = MatrixXd::Ones(1, 3);
  p.b = VectorXd::Ones(1);
  CHECK_THROWS_AS(lp::solve(p), InputError);
  auto q = lp::LpProblem::with_dim(2);
  q.E = MatrixXd::Ones(2, 2);
  q.f = VectorXd::Ones(1);
  CHECK_THROWS_AS(lp::feasible(q), InputError);
  CHECK_THROWS_AS(lp::solve(lp::LpProblem::with_dim(0)), InputError);
  auto r = one_dim(std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(lp::solve(r), InputError);
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
  // min -3/4 x1 + 20 x2 - 1/2 x3 + 6 x4, x >= 0; cycles under Dantzig's rule.
  // Optimum -5/4 at x = (1, 0, 1, 0).
  auto p = lp::LpProblem::with_dim(4);
  p.sense = lp::Sense::Minimize;
  p.objective << -0.75, 20.0, -0.5, 6.0;
  add_ineq(p, {0.25, -8.0, -1.0, 9.0}, 0.0);
  add_ineq(p, {0.5, -12.0, -0.5, 3.0}, 0.0);
  add_ineq(p, {0.0, 0.0, 1.0, 0.0}, 1.0);
  for (int j = 0; j < 4; ++j) {
    p.A.conservativeResize(p.A.rows() + 1, 4);
    p.b.conservativeResize(p.b.size() + 1);
    p.A.bottomRows(1).setZero();
    p.A(p.A.rows() - 1, j) = -1.0;
    p.b(p.b.size() - 1) = 0.0;
  }
  const auto r = lp::solve(p);
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(-1.25).epsilon(1e-12));
}

TEST_CASE("badly scaled rows still certify at 1e-9") {
  // Rows spanning MW (1e3) and p.u. (1e-2) magnitudes.
  auto p = lp::LpProblem::with_dim(2);
  p.objective << 1.0, 1.0;
  add_ineq(p, {1000.0, 0.0}, 2500.0);
  add_ineq(p, {0.0, 0.01}, 0.03);
  add_ineq(p, {-0.02, -0.01}, 10.0);
  const auto r = lp::solve(p);
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(5.5));
  CHECK(lp::max_violation(p, *r.point) <= lp::kFeasTol);
}

TEST_CASE("strong duality on random LPs") {
  std::mt19937 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const int m = 2 + trial % 7;
    const int q = trial % 3 == 0 ? 1 : 0;
    const auto p = random_lp(rng, n, m, q);
    const auto primal = lp::solve(p);
    REQUIRE(primal.optimal());
    CHECK(lp::max_violation(p, *primal.point) <= lp::kFeasTol);
    const auto dual = lp::solve(dual_of(p));
    REQUIRE(dual.optimal());
    CHECK(std::abs(primal.value - dual.value) <= 1e-7);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("repeated solves are bit-identical") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_lp(rng, 4, 6, trial % 2);
    const auto a = lp::solve(p);
    const auto b = lp::solve(p);
    REQUIRE(a.status == b.status);
    CHECK(std::memcmp(&a.value, &b.value, sizeof(double)) == 0);
    CHECK(std::memcmp(a.point->data(), b.point->data(), sizeof(double) * 4) == 0);
  }
}

TEST_CASE("sparse backend agrees with the dense solver") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_lp(rng, 3, 5, 1);
    lp::SparseLp s;
    s.cost = p.objective;
    const double inf = std::numeric_limits<double>::infinity();
    s.col_lower = VectorXd::Constant(3, -inf);
    s.col_upper = VectorXd::Constant(3, inf);
    MatrixXd M(p.A.rows() + p.E.rows(), 3);
    M << p.A, p.E;
    s.M = M.sparseView();
    s.row_lower.resize(M.rows());
    s.row_upper.resize(M.rows());
    s.row_lower << VectorXd::Constant(p.A.rows(), -inf), p.f;
    s.row_upper << p.b, p.f;
    const auto dense = lp::solve(p);
    const auto sparse = lp::solve(s);
    REQUIRE(sparse.optimal());
    CHECK(sparse.value == doctest::Approx(dense.value).epsilon(1e-8));
  }
  lp::SparseLp bad;
  bad.cost = VectorXd::Ones(1);
  bad.col_lower = VectorXd::Constant(1, 1.0);
  bad.col_upper = VectorXd::Constant(1, 0.0);
  bad.M.resize(0, 1);
  bad.row_lower.resize(0);
  bad.row_upper.resize(0);
  CHECK(lp::solve(bad).status == lp::Status::Infeasible);
}
