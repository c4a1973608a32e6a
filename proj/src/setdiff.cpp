#include "gridhull/setdiff.hpp"

#include "gridhull/error.hpp"

namespace gridhull {

namespace {

bool thick(const Polyhedron& P) {
  try {
    return chebyshev_center(P).radius >= kSliverRadius;
  } catch (const InputError&) {
    return false;
  }
}

void require_bounded(const Polyhedron& Y) {
  for (Eigen::Index j = 0; j < Y.dim(); ++j)
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(Y.dim());
      d(j) = s;
      if (support(Y, d).status == lp::Status::Unbounded)
        throw UnboundedError("region_diff: minuend is unbounded along axis " + std::to_string(j));
    }
}

void diff(const Polyhedron& Y, const std::vector<Polyhedron>& R, size_t idx, std::vector<Polyhedron>& out) {
  if (idx == R.size()) {
    out.push_back(remove_redundancy(Y));
    return;
  }
  const Polyhedron& Ri = R[idx];
  // Lower-dimensional subtrahends and those missing Y's interior change nothing.
  if (!interiors_overlap(Y, Ri, kSliverRadius)) {
    diff(Y, R, idx + 1, out);
    return;
  }
  Polyhedron rest = Y;
  for (Eigen::Index i = 0; i < Ri.num_ineq(); ++i) {
    const Eigen::RowVectorXd a = Ri.A().row(i);
    const double b = Ri.b()(i);
    const Polyhedron outside = rest.with_row(-a, -b);
    if (thick(outside)) diff(outside, R, idx + 1, out);
    rest = rest.with_row(a, b);
    if (!thick(rest)) return;
  }
  // What remains lies inside R_i.
}

}  // namespace

PolyUnion region_diff(const Polyhedron& Y, const std::vector<Polyhedron>& R) {
  for (const auto& Ri : R)
    if (Ri.dim() != Y.dim()) throw InputError("region_diff: dimension mismatch");
  PolyUnion U;
  U.dim = Y.dim();
  U.disjoint_interiors = true;
  if (is_empty(Y)) return U;
  require_bounded(Y);
  if (R.empty()) {
    U.parts.push_back(Y);
    return U;
  }
  if (!thick(Y)) return U;
  diff(Y, R, 0, U.parts);
  return U;
}

bool union_contains(const PolyUnion& U, const Eigen::VectorXd& y, double tol) {
  if (y.size() != U.dim) throw InputError("union_contains: dimension mismatch");
  for (const auto& P : U.parts)
    if (contains(P, y, tol)) return true;
  return false;
}

}  // namespace gridhull
