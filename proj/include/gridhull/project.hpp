#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gridhull/polytope.hpp"

namespace gridhull {

// Partition of buses into regions; region j aggregates the injections of
// every bus i with region_of[i] == j.
struct AggregationMap {
  Eigen::Index n_bus = 0;
  Eigen::Index n_regions = 0;
  std::vector<Eigen::Index> region_of;
  std::vector<std::string> names;  // optional, one per region when present

  // Validates: total, every region nonempty, n_regions <= n_bus.
  static AggregationMap from_assignment(std::vector<Eigen::Index> region_of, Eigen::Index n_regions,
                                        std::vector<std::string> names = {});
  static AggregationMap identity(Eigen::Index n_bus);

  Eigen::MatrixXd matrix() const;  // n_regions x n_bus, one 1 per column
  std::vector<Eigen::Index> members(Eigen::Index region) const;
};

Eigen::VectorXd apply_map(const AggregationMap& T, const Eigen::VectorXd& x);

// Elimination row cap: GRIDHULL_ROW_CAP when set, otherwise 1e5.
Eigen::Index default_row_cap();

// {M x : x in P} for a full-row-rank M, by a change of coordinates that makes
// the image variables explicit followed by Fourier-Motzkin elimination of the
// remaining ones. Throws ResourceError when an intermediate system exceeds
// `row_cap` rows.
Polyhedron image_exact(const Polyhedron& P, const Eigen::MatrixXd& M, Eigen::Index row_cap = default_row_cap());
Polyhedron image_exact(const Polyhedron& P, const AggregationMap& T, Eigen::Index row_cap = default_row_cap());

// Maximizes d·y over some set S in image space. Implementations return the
// value and a maximizer y in S (or Unbounded / Infeasible).
class SupportOracle {
 public:
  virtual ~SupportOracle() = default;
  virtual Eigen::Index dim() const = 0;
  virtual SupportResult support(const Eigen::VectorXd& d) const = 0;
};

// S = M·P for a dense polyhedron P.
class PolyhedronImageOracle : public SupportOracle {
 public:
  PolyhedronImageOracle(Polyhedron P, Eigen::MatrixXd M);
  Eigen::Index dim() const override { return M_.rows(); }
  SupportResult support(const Eigen::VectorXd& d) const override;

 private:
  Polyhedron P_;
  Eigen::MatrixXd M_;
};

struct ApproxOptions {
  int budget = 64;         // support queries, including the axis directions
  double tol = 1.0;        // MW, stop when gap <= tol
  unsigned seed = 42;
  bool refine = true;      // query inner-hull facet normals between sphere samples
};

struct ApproxSet {
  Eigen::Index dim = 0;
  std::vector<Eigen::VectorXd> inner_vertices;  // maximizers, deduplicated
  Polyhedron inner;                             // hull H-rep; valid when has_inner_hrep
  bool has_inner_hrep = false;
  Polyhedron outer;
  double gap = 0.0;
  std::vector<Eigen::VectorXd> directions;      // queried, in query order
  std::vector<double> support_values;
};

ApproxSet image_approx(const SupportOracle& oracle, const ApproxOptions& opt = {});
ApproxSet image_approx(const Polyhedron& P, const AggregationMap& T, const ApproxOptions& opt = {});

// H-representation of the convex hull of points whose affine hull has
// dimension <= 3 (equalities describe the affine hull). Throws InputError
// for higher-dimensional clouds.
Polyhedron hull_hrep(const std::vector<Eigen::VectorXd>& points, Eigen::Index dim);

// max over d of support(outer, d) - support(inner, d), d ranging over the
// outer and inner facet normals. Needs a nonempty inner set.
double gap_estimate(const ApproxSet& a);

}  // namespace gridhull
