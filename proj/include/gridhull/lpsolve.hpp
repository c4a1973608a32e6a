#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <string>

namespace gridhull::lp {

enum class Sense { Maximize, Minimize };
enum class Status { Optimal, Infeasible, Unbounded };

std::string to_string(Status s);

// Dense LP over free variables:
//   optimize objective·x  s.t.  A·x <= b,  E·x = f.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd E;
  Eigen::VectorXd f;
  Sense sense = Sense::Maximize;

  // Problem with n variables and no constraints.
  static LpProblem with_dim(Eigen::Index n);
  Eigen::Index dim() const { return objective.size(); }
};

struct LpResult {
  Status status = Status::Infeasible;
  double value = 0.0;
  std::optional<Eigen::VectorXd> point;

  bool optimal() const { return status == Status::Optimal; }
};

// Feasibility tolerance, absolute, on rows scaled to unit Euclidean norm.
inline constexpr double kFeasTol = 1e-9;

// Two-phase primal simplex with Bland's rule. Deterministic: identical input
// gives bit-identical output. Throws InputError on inconsistent dimensions or
// non-finite data.
LpResult solve(const LpProblem& p);

// Phase-1 only: true iff the constraint set is nonempty.
bool feasible(const LpProblem& p);

// Largest normalized row violation of `x` (0 when feasible). Used for
// certificates and by tests.
double max_violation(const LpProblem& p, const Eigen::VectorXd& x);

// Sparse LP with column bounds and ranged rows:
//   optimize cost·x  s.t.  row_lower <= M·x <= row_upper,  col_lower <= x <= col_upper.
// Infinite bounds are +-std::numeric_limits<double>::infinity().
// Intended for network-scale problems; solved with a sparse dual simplex.
struct SparseLp {
  Eigen::VectorXd cost;
  Eigen::VectorXd col_lower, col_upper;
  Eigen::SparseMatrix<double, Eigen::ColMajor> M;
  Eigen::VectorXd row_lower, row_upper;
  Sense sense = Sense::Maximize;
};

LpResult solve(const SparseLp& p);

}  // namespace gridhull::lp
