#include "gridhull/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gridhull/error.hpp"

namespace gridhull {

namespace {

constexpr double kZeroNorm = 1e-14;

void require_dim(const Polyhedron& P, Eigen::Index n, const char* what) {
  if (P.dim() != n)
    throw InputError(std::string(what) + ": dimension " + std::to_string(n) +
                     " does not match polyhedron dimension " + std::to_string(P.dim()));
}

Eigen::MatrixXd vstack(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom, Eigen::Index cols) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), cols);
  if (top.rows()) out.topRows(top.rows()) = top;
  if (bottom.rows()) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

Eigen::VectorXd vcat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew's monotone chain; returns CCW hull without collinear points.
std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts, double eps) {
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Eigen::Vector2d> uniq;
  for (const auto& p : pts)
    if (uniq.empty() || (p - uniq.back()).norm() > eps) uniq.push_back(p);
  if (uniq.size() < 3) return uniq;
  std::vector<Eigen::Vector2d> hull(2 * uniq.size());
  size_t k = 0;
  for (const auto& p : uniq) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= eps * eps) --k;
    hull[k++] = p;
  }
  for (size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(hull[k - 2], hull[k - 1], uniq[i]) <= eps * eps) --k;
    hull[k++] = uniq[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

Polyhedron::Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::MatrixXd E, Eigen::VectorXd f)
    : A_(std::move(A)), b_(std::move(b)), E_(std::move(E)), f_(std::move(f)) {
  dim_ = A_.cols();
  if (E_.rows() == 0 && E_.cols() != dim_) E_.resize(0, dim_);
  if (A_.rows() == 0 && A_.cols() != E_.cols() && E_.cols() > 0) {
    dim_ = E_.cols();
    A_.resize(0, dim_);
  }
  if (E_.cols() != dim_) throw InputError("equality matrix column count differs from inequality matrix");
  if (b_.size() != A_.rows()) throw InputError("inequality rhs length mismatch");
  if (f_.size() != E_.rows()) throw InputError("equality rhs length mismatch");
  if (!A_.allFinite() || !b_.allFinite() || !E_.allFinite() || !f_.allFinite())
    throw InputError("polyhedron rows must be finite");
}

Polyhedron::Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b)
    : Polyhedron(A, std::move(b), Eigen::MatrixXd(0, A.cols()), Eigen::VectorXd(0)) {}

Polyhedron Polyhedron::universe(Eigen::Index dim) {
  return Polyhedron(Eigen::MatrixXd(0, dim), Eigen::VectorXd(0), Eigen::MatrixXd(0, dim),
                    Eigen::VectorXd(0));
}

Polyhedron Polyhedron::empty(Eigen::Index dim) {
  Eigen::VectorXd b(1);
  b << -1.0;
  return Polyhedron(Eigen::MatrixXd::Zero(1, dim), b, Eigen::MatrixXd(0, dim), Eigen::VectorXd(0));
}

Polyhedron Polyhedron::box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  const Eigen::Index n = lower.size();
  if (upper.size() != n) throw InputError("box bound lengths differ");
  Eigen::MatrixXd A(2 * n, n);
  A << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  return Polyhedron(A, vcat(upper, -lower));
}

Polyhedron Polyhedron::with_row(const Eigen::RowVectorXd& a, double rhs) const {
  if (a.size() != dim_) throw InputError("row length does not match polyhedron dimension");
  Eigen::MatrixXd A = vstack(A_, a, dim_);
  Eigen::VectorXd b(b_.size() + 1);
  b << b_, rhs;
  return Polyhedron(std::move(A), std::move(b), E_, f_);
}

Polyhedron Polyhedron::with_equality(const Eigen::RowVectorXd& e, double rhs) const {
  if (e.size() != dim_) throw InputError("row length does not match polyhedron dimension");
  Eigen::MatrixXd E = vstack(E_, e, dim_);
  Eigen::VectorXd f(f_.size() + 1);
  f << f_, rhs;
  return Polyhedron(A_, b_, std::move(E), std::move(f));
}

lp::LpProblem Polyhedron::as_lp() const {
  lp::LpProblem p;
  p.objective = Eigen::VectorXd::Zero(dim_);
  p.A = A_;
  p.b = b_;
  p.E = E_;
  p.f = f_;
  return p;
}

bool contains(const Polyhedron& P, const Eigen::VectorXd& y, double tol) {
  require_dim(P, y.size(), "contains");
  for (Eigen::Index i = 0; i < P.num_ineq(); ++i) {
    const double nr = P.A().row(i).norm();
    const double r = P.A().row(i).dot(y) - P.b()(i);
    if ((nr > kZeroNorm ? r / nr : r) > tol) return false;
  }
  for (Eigen::Index i = 0; i < P.num_eq(); ++i) {
    const double nr = P.E().row(i).norm();
    const double r = std::abs(P.E().row(i).dot(y) - P.f()(i));
    if ((nr > kZeroNorm ? r / nr : r) > std::abs(tol)) return false;
  }
  return true;
}

bool is_empty(const Polyhedron& P) {
  if (P.dim() == 0) return false;
  return !lp::feasible(P.as_lp());
}

Polyhedron intersect(const Polyhedron& P, const Polyhedron& Q) {
  require_dim(Q, P.dim(), "intersect");
  return Polyhedron(vstack(P.A(), Q.A(), P.dim()), vcat(P.b(), Q.b()), vstack(P.E(), Q.E(), P.dim()),
                    vcat(P.f(), Q.f()));
}

Polyhedron remove_redundancy(const Polyhedron& P) {
  const Eigen::Index n = P.dim();
  if (is_empty(P)) return Polyhedron::empty(n);

  // Normalize, drop zero rows, collapse duplicates keeping the tighter rhs.
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < P.num_ineq(); ++i) {
    const double nr = P.A().row(i).norm();
    if (nr < kZeroNorm) continue;
    Eigen::RowVectorXd a = P.A().row(i) / nr;
    const double bi = P.b()(i) / nr;
    bool merged = false;
    for (size_t k = 0; k < rows.size(); ++k) {
      if ((rows[k] - a).norm() < 1e-12) {
        rhs[k] = std::min(rhs[k], bi);
        merged = true;
        break;
      }
    }
    if (!merged) {
      rows.push_back(std::move(a));
      rhs.push_back(bi);
    }
  }

  // Independent equality rows.
  Eigen::MatrixXd E(0, n);
  Eigen::VectorXd f(0);
  for (Eigen::Index i = 0; i < P.num_eq(); ++i) {
    const double nr = P.E().row(i).norm();
    if (nr < kZeroNorm) continue;
    Eigen::MatrixXd trial(E.rows() + 1, n);
    if (E.rows()) trial.topRows(E.rows()) = E;
    trial.bottomRows(1) = P.E().row(i) / nr;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
    lu.setThreshold(1e-10);
    if (lu.rank() == trial.rows()) {
      E = std::move(trial);
      f.conservativeResize(f.size() + 1);
      f(f.size() - 1) = P.f()(i) / nr;
    }
  }

  std::vector<bool> keep(rows.size(), true);
  for (size_t i = 0; i < rows.size(); ++i) {
    Eigen::Index others = 0;
    for (size_t k = 0; k < rows.size(); ++k)
      if (k != i && keep[k]) ++others;
    lp::LpProblem lp;
    lp.objective = rows[i].transpose();
    lp.A.resize(others, n);
    lp.b.resize(others);
    Eigen::Index r = 0;
    for (size_t k = 0; k < rows.size(); ++k) {
      if (k == i || !keep[k]) continue;
      lp.A.row(r) = rows[k];
      lp.b(r) = rhs[k];
      ++r;
    }
    lp.E = E;
    lp.f = f;
    const lp::LpResult res = lp::solve(lp);
    if (res.status == lp::Status::Optimal &&
        res.value <= rhs[i] + 1e-9 * std::max(1.0, std::abs(rhs[i])))
      keep[i] = false;
  }

  Eigen::Index m = 0;
  for (bool k : keep) m += k ? 1 : 0;
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd b(m);
  Eigen::Index r = 0;
  for (size_t k = 0; k < rows.size(); ++k) {
    if (!keep[k]) continue;
    A.row(r) = rows[k];
    b(r) = rhs[k];
    ++r;
  }
  return Polyhedron(std::move(A), std::move(b), std::move(E), std::move(f));
}

SupportResult support(const Polyhedron& P, const Eigen::VectorXd& d) {
  require_dim(P, d.size(), "support");
  lp::LpProblem lp = P.as_lp();
  lp.objective = d;
  lp.sense = lp::Sense::Maximize;
  const lp::LpResult res = lp::solve(lp);
  SupportResult out;
  out.status = res.status;
  if (res.optimal()) {
    out.value = res.value;
    out.maximizer = *res.point;
  }
  return out;
}

AffineFrame affine_frame(const Polyhedron& P) {
  const Eigen::Index n = P.dim();
  AffineFrame fr;
  if (P.num_eq() == 0) {
    fr.origin = Eigen::VectorXd::Zero(n);
    fr.basis = Eigen::MatrixXd::Identity(n, n);
    return fr;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P.E(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * std::max(1.0, smax)) ++rank;
  svd.setThreshold(1e-10);
  fr.origin = svd.solve(P.f());
  const Eigen::VectorXd resid = P.E() * fr.origin - P.f();
  if (resid.cwiseAbs().maxCoeff() > 1e-7 * std::max(1.0, P.f().cwiseAbs().maxCoeff()))
    throw InputError("inconsistent equality constraints");
  fr.basis = svd.matrixV().rightCols(n - rank);
  return fr;
}

Polyhedron to_frame(const Polyhedron& P, const AffineFrame& frame) {
  const Eigen::Index k = frame.basis.cols();
  return Polyhedron(P.A() * frame.basis, P.b() - P.A() * frame.origin, Eigen::MatrixXd(0, k),
                    Eigen::VectorXd(0));
}

Ball chebyshev_center(const Polyhedron& P) {
  const AffineFrame fr = affine_frame(P);
  const Polyhedron Z = to_frame(P, fr);
  const Eigen::Index k = Z.dim();
  if (k == 0) {
    if (!contains(P, fr.origin)) throw InputError("chebyshev_center: empty polyhedron");
    return Ball{fr.origin, 0.0};
  }
  lp::LpProblem lp = lp::LpProblem::with_dim(k + 1);
  lp.objective(k) = 1.0;
  lp.A.resize(Z.num_ineq() + 1, k + 1);
  lp.b.resize(Z.num_ineq() + 1);
  for (Eigen::Index i = 0; i < Z.num_ineq(); ++i) {
    lp.A.row(i).head(k) = Z.A().row(i);
    lp.A(i, k) = Z.A().row(i).norm();
    lp.b(i) = Z.b()(i);
  }
  lp.A.row(Z.num_ineq()).setZero();
  lp.A(Z.num_ineq(), k) = -1.0;
  lp.b(Z.num_ineq()) = 0.0;
  const lp::LpResult res = lp::solve(lp);
  if (res.status == lp::Status::Infeasible) throw InputError("chebyshev_center: empty polyhedron");
  if (res.status == lp::Status::Unbounded) throw UnboundedError("chebyshev_center: unbounded radius");
  const Eigen::VectorXd z = res.point->head(k);
  return Ball{fr.origin + fr.basis * z, (*res.point)(k)};
}

std::vector<Eigen::VectorXd> vertices_2d(const Polyhedron& P) {
  const AffineFrame fr = affine_frame(P);
  const Eigen::Index k = fr.basis.cols();
  if (k > 2)
    throw InputError("vertices_2d: effective dimension " + std::to_string(k) +
                     " exceeds 2; project onto two axes first");
  if (is_empty(P)) return {};
  if (k == 0) return {fr.origin};

  const Polyhedron Z = to_frame(P, fr);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(k);
      d(j) = s;
      if (support(Z, d).status == lp::Status::Unbounded)
        throw UnboundedError("vertices_2d: polyhedron is unbounded");
    }
  }

  std::vector<Eigen::VectorXd> out;
  if (k == 1) {
    Eigen::VectorXd d(1);
    d << 1.0;
    const double hi = support(Z, d).value;
    const double lo = -support(Z, -d).value;
    out.push_back(fr.origin + fr.basis.col(0) * lo);
    if (hi - lo > 1e-8) out.push_back(fr.origin + fr.basis.col(0) * hi);
    return out;
  }

  // Pairwise facet intersections filtered by feasibility, then hull.
  std::vector<Eigen::Vector2d> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < Z.num_ineq(); ++i) {
    const double nr = Z.A().row(i).norm();
    if (nr < kZeroNorm) continue;
    rows.emplace_back(Z.A()(i, 0) / nr, Z.A()(i, 1) / nr);
    rhs.push_back(Z.b()(i) / nr);
  }
  double scale = 1.0;
  for (double v : rhs) scale = std::max(scale, std::abs(v));
  std::vector<Eigen::Vector2d> cand;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = i + 1; j < rows.size(); ++j) {
      Eigen::Matrix2d M;
      M.row(0) = rows[i].transpose();
      M.row(1) = rows[j].transpose();
      const double det = M.determinant();
      if (std::abs(det) < 1e-12) continue;
      const Eigen::Vector2d p = M.inverse() * Eigen::Vector2d(rhs[i], rhs[j]);
      bool ok = true;
      for (size_t r = 0; r < rows.size() && ok; ++r)
        ok = rows[r].dot(p) <= rhs[r] + 1e-9 * scale;
      if (ok) cand.push_back(p);
    }
  }
  const std::vector<Eigen::Vector2d> hull = convex_hull_2d(cand, 1e-8 * scale);
  out.reserve(hull.size());
  for (const auto& p : hull) out.push_back(fr.origin + fr.basis * p);
  return out;
}

bool interiors_overlap(const Polyhedron& P, const Polyhedron& Q, double tol) {
  try {
    return chebyshev_center(intersect(P, Q)).radius > tol;
  } catch (const InputError&) {
    return false;
  } catch (const UnboundedError&) {
    return true;
  }
}

bool check_disjoint_interiors(const PolyUnion& U, double tol) {
  for (size_t i = 0; i < U.parts.size(); ++i)
    for (size_t j = i + 1; j < U.parts.size(); ++j)
      if (interiors_overlap(U.parts[i], U.parts[j], tol)) return false;
  return true;
}

}  // namespace gridhull
