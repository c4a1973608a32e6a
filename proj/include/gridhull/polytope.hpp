#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gridhull/lpsolve.hpp"

namespace gridhull {

// H-representation {y : A·y <= b, E·y = f}. May be empty or unbounded.
//
// Equalities are stored explicitly and honored by every primitive; nothing
// is eliminated behind the caller's back. Instances are immutable.
class Polyhedron {
 public:
  Polyhedron() = default;
  Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::MatrixXd E, Eigen::VectorXd f);
  Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b);

  static Polyhedron universe(Eigen::Index dim);
  // Canonical empty set: the single row 0·y <= -1.
  static Polyhedron empty(Eigen::Index dim);
  static Polyhedron box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

  Eigen::Index dim() const { return dim_; }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::MatrixXd& E() const { return E_; }
  const Eigen::VectorXd& f() const { return f_; }
  Eigen::Index num_ineq() const { return A_.rows(); }
  Eigen::Index num_eq() const { return E_.rows(); }

  // Same set with an extra inequality / equality row.
  Polyhedron with_row(const Eigen::RowVectorXd& a, double rhs) const;
  Polyhedron with_equality(const Eigen::RowVectorXd& e, double rhs) const;

  // LP with this feasible set and a zero objective.
  lp::LpProblem as_lp() const;

 private:
  Eigen::Index dim_ = 0;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd E_;
  Eigen::VectorXd f_;
};

// Finite family of polyhedra of a common dimension. When
// `disjoint_interiors` is set, no two parts share interior points.
struct PolyUnion {
  Eigen::Index dim = 0;
  std::vector<Polyhedron> parts;
  bool disjoint_interiors = false;

  bool empty() const { return parts.empty(); }
};

inline constexpr double kMembershipTol = 1e-6;

// Membership after scaling each row to unit norm. A negative tol asks for
// that margin inside every inequality; equalities always use |tol|.
bool contains(const Polyhedron& P, const Eigen::VectorXd& y, double tol = kMembershipTol);
bool is_empty(const Polyhedron& P);
Polyhedron intersect(const Polyhedron& P, const Polyhedron& Q);

// Drops duplicate and LP-redundant inequalities; every remaining row
// strictly enlarges the set when removed. Empty input yields Polyhedron::empty.
Polyhedron remove_redundancy(const Polyhedron& P);

struct SupportResult {
  lp::Status status = lp::Status::Infeasible;
  double value = 0.0;
  Eigen::VectorXd maximizer;
};

// max d·y over P.
SupportResult support(const Polyhedron& P, const Eigen::VectorXd& d);

struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;
};

// Largest ball inside P within the affine hull of its equalities.
// Throws InputError for an empty P and UnboundedError for an unbounded radius.
Ball chebyshev_center(const Polyhedron& P);

// Counter-clockwise vertices of a bounded P whose effective dimension (after
// removing equalities) is at most 2. In an embedding space of dimension > 2
// the orientation refers to the orthonormal basis of the equality null space.
std::vector<Eigen::VectorXd> vertices_2d(const Polyhedron& P);

// Affine parametrization y = origin + basis·z of {y : E·y = f}; basis columns
// are orthonormal. Throws InputError when the equalities are inconsistent.
struct AffineFrame {
  Eigen::VectorXd origin;
  Eigen::MatrixXd basis;
};
AffineFrame affine_frame(const Polyhedron& P);

// Inequalities of P expressed in the coordinates z of `frame`.
Polyhedron to_frame(const Polyhedron& P, const AffineFrame& frame);

// True when P and Q share a ball of radius > tol in their common affine hull.
bool interiors_overlap(const Polyhedron& P, const Polyhedron& Q, double tol = 1e-7);

// Pairwise interior-overlap check over all parts.
bool check_disjoint_interiors(const PolyUnion& U, double tol = 1e-7);

}  // namespace gridhull
