#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gridhull/polytope.hpp"

namespace gridhull {

// Pieces thinner than this Chebyshev radius are dropped.
inline constexpr double kSliverRadius = 1e-7;

// Y minus the union of R as interior-disjoint polytopes. R is processed in
// order and each R_i is split along its rows in row order; the cover is not
// canonical. Throws UnboundedError when Y is unbounded.
PolyUnion region_diff(const Polyhedron& Y, const std::vector<Polyhedron>& R);

bool union_contains(const PolyUnion& U, const Eigen::VectorXd& y, double tol = kMembershipTol);

}  // namespace gridhull
