#include "gridhull/project.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "gridhull/error.hpp"

namespace gridhull {

namespace {

constexpr double kCoefTol = 1e-12;

std::string fmt_vec(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

// Dense constraint system over columns [y | z], z being eliminated.
struct System {
  Eigen::Index ny = 0;
  Eigen::MatrixXd A;  // ineq rows over ny + nz columns
  Eigen::VectorXd b;
  Eigen::MatrixXd E;
  Eigen::VectorXd f;

  Eigen::Index nz() const { return A.cols() - ny; }
};

void drop_column(Eigen::MatrixXd& M, Eigen::Index c) {
  const Eigen::Index right = M.cols() - c - 1;
  if (right > 0) M.middleCols(c, right) = M.rightCols(right).eval();
  M.conservativeResize(M.rows(), M.cols() - 1);
}

// Solve equality row `r` for column `c` and substitute everywhere.
void substitute(System& s, Eigen::Index r, Eigen::Index c) {
  const Eigen::RowVectorXd e = s.E.row(r);
  const double fe = s.f(r);
  const double pivot = e(c);
  auto eliminate = [&](Eigen::MatrixXd& M, Eigen::VectorXd& rhs) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      const double a = M(i, c);
      if (a == 0.0) continue;
      M.row(i) -= (a / pivot) * e;
      rhs(i) -= (a / pivot) * fe;
      M(i, c) = 0.0;
    }
  };
  eliminate(s.A, s.b);
  eliminate(s.E, s.f);
  // Remove the used row and the column.
  const Eigen::Index below = s.E.rows() - r - 1;
  if (below > 0) {
    s.E.middleRows(r, below) = s.E.bottomRows(below).eval();
    s.f.segment(r, below) = s.f.tail(below).eval();
  }
  s.E.conservativeResize(s.E.rows() - 1, Eigen::NoChange);
  s.f.conservativeResize(s.f.size() - 1);
  drop_column(s.A, c);
  drop_column(s.E, c);
}

void eliminate_equalities(System& s) {
  Eigen::Index r = 0;
  while (r < s.E.rows()) {
    const Eigen::Index nz = s.nz();
    Eigen::Index best = -1;
    double mag = 0.0;
    const double scale = std::max(1.0, s.E.row(r).cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < nz; ++j) {
      const double v = std::abs(s.E(r, s.ny + j));
      if (v > mag && v > kCoefTol * scale) {
        mag = v;
        best = j;
      }
    }
    if (best < 0) {
      s.E.row(r).tail(nz).setZero();
      ++r;
      continue;
    }
    substitute(s, r, s.ny + best);
  }
}

void normalize_rows(Eigen::MatrixXd& A, Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double nr = A.row(i).norm();
    if (nr > 0.0) {
      A.row(i) /= nr;
      b(i) /= nr;
    }
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (std::abs(A(i, j)) < kCoefTol) A(i, j) = 0.0;
  }
}

// One Fourier-Motzkin step on column c of the inequality block.
void fm_step(System& s, Eigen::Index c, Eigen::Index row_cap) {
  std::vector<Eigen::Index> pos, neg, zero;
  for (Eigen::Index i = 0; i < s.A.rows(); ++i) {
    const double v = s.A(i, c);
    if (v > kCoefTol) pos.push_back(i);
    else if (v < -kCoefTol) neg.push_back(i);
    else zero.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(zero.size() + pos.size() * neg.size());
  if (m > row_cap)
    throw ResourceError("projection by elimination needs " + std::to_string(m) +
                        " rows (cap " + std::to_string(row_cap) + "); use the approximate image instead");
  Eigen::MatrixXd A(m, s.A.cols());
  Eigen::VectorXd b(m);
  Eigen::Index r = 0;
  for (Eigen::Index i : zero) {
    A.row(r) = s.A.row(i);
    A(r, c) = 0.0;
    b(r++) = s.b(i);
  }
  for (Eigen::Index p : pos) {
    for (Eigen::Index q : neg) {
      const double cp = s.A(p, c);
      const double cq = -s.A(q, c);
      A.row(r) = cq * s.A.row(p) + cp * s.A.row(q);
      A(r, c) = 0.0;
      b(r++) = cq * s.b(p) + cp * s.b(q);
    }
  }
  drop_column(A, c);
  normalize_rows(A, b);
  s.A = std::move(A);
  s.b = std::move(b);
  drop_column(s.E, c);
}

Polyhedron as_polyhedron(const System& s) {
  return Polyhedron(s.A, s.b, s.E, s.f);
}

System from_polyhedron(const Polyhedron& P, Eigen::Index ny) {
  System s;
  s.ny = ny;
  s.A = P.A();
  s.b = P.b();
  s.E = P.E();
  s.f = P.f();
  return s;
}

double scale_of(const std::vector<Eigen::VectorXd>& pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

// Orthonormal basis of the complement of span(rows of N) in R^k.
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& N, Eigen::Index k) {
  if (N.rows() == 0) return Eigen::MatrixXd::Identity(k, k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(N, Eigen::ComputeFullV);
  Eigen::Index rank = 0;
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * std::max(1.0, sv(0))) ++rank;
  return svd.matrixV().rightCols(k - rank);
}

// Halton radical inverse.
double radical_inverse(unsigned long i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// Quasi-uniform points on S^{r-1}: shifted Halton points pushed through
// Box-Muller, normalized.
class SphereSequence {
 public:
  SphereSequence(Eigen::Index r, unsigned seed) : r_(r) {
    static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    const Eigen::Index pairs = (r + 1) / 2;
    if (2 * pairs > 16) throw InputError("direction sampling supports at most 16 image dimensions");
    unsigned long long state = 0x9E3779B97F4A7C15ull ^ seed;
    for (Eigen::Index j = 0; j < 2 * pairs; ++j) {
      bases_.push_back(kPrimes[j]);
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      shift_.push_back(static_cast<double>(state >> 11) / 9007199254740992.0);
    }
  }

  Eigen::VectorXd next() {
    for (;;) {
      ++index_;
      Eigen::VectorXd g(bases_.size());
      for (size_t j = 0; j < bases_.size(); j += 2) {
        double u1 = std::fmod(radical_inverse(index_, bases_[j]) + shift_[j], 1.0);
        const double u2 = std::fmod(radical_inverse(index_, bases_[j + 1]) + shift_[j + 1], 1.0);
        u1 = std::max(u1, 1e-12);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        g(static_cast<Eigen::Index>(j)) = rad * std::cos(2.0 * M_PI * u2);
        g(static_cast<Eigen::Index>(j + 1)) = rad * std::sin(2.0 * M_PI * u2);
      }
      Eigen::VectorXd d = g.head(r_);
      const double nr = d.norm();
      if (nr > 1e-9) return d / nr;
    }
  }

 private:
  Eigen::Index r_;
  std::vector<unsigned> bases_;
  std::vector<double> shift_;
  unsigned long index_ = 0;
};

double max_dot(const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& d) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) m = std::max(m, d.dot(p));
  return m;
}

struct Facet {
  Eigen::VectorXd normal;
  double rhs;
};

// Facets of the hull of pts (in R^r, r <= 3, full-dimensional).
std::vector<Facet> hull_facets(const std::vector<Eigen::VectorXd>& pts, Eigen::Index r, double eps) {
  std::vector<Facet> out;
  const size_t n = pts.size();
  auto add = [&](Eigen::VectorXd nrm, double rhs) {
    for (const auto& f : out)
      if ((f.normal - nrm).norm() < 1e-9 && std::abs(f.rhs - rhs) <= eps) return;
    out.push_back(Facet{std::move(nrm), rhs});
  };
  auto try_plane = [&](const Eigen::VectorXd& nrm, double rhs) {
    bool le = true, ge = true;
    for (const auto& p : pts) {
      const double s = nrm.dot(p) - rhs;
      le = le && s <= eps;
      ge = ge && s >= -eps;
      if (!le && !ge) return;
    }
    if (le) add(nrm, rhs);
    if (ge) add(-nrm, -rhs);
  };
  if (r == 1) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : pts) {
      lo = std::min(lo, p(0));
      hi = std::max(hi, p(0));
    }
    out.push_back(Facet{Eigen::VectorXd::Constant(1, 1.0), hi});
    out.push_back(Facet{Eigen::VectorXd::Constant(1, -1.0), -lo});
    return out;
  }
  if (r == 2) {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        const Eigen::Vector2d e = pts[j] - pts[i];
        if (e.norm() <= eps) continue;
        Eigen::VectorXd nrm(2);
        nrm << e.y(), -e.x();
        nrm.normalize();
        try_plane(nrm, nrm.dot(pts[i]));
      }
    return out;
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        const Eigen::Vector3d a = pts[j] - pts[i];
        const Eigen::Vector3d b = pts[k] - pts[i];
        Eigen::Vector3d c = a.cross(b);
        if (c.norm() <= eps * std::max(a.norm(), b.norm())) continue;
        c.normalize();
        Eigen::VectorXd nrm = c;
        try_plane(nrm, nrm.dot(pts[i]));
      }
  return out;
}

}  // namespace

AggregationMap AggregationMap::from_assignment(std::vector<Eigen::Index> region_of, Eigen::Index n_regions,
                                               std::vector<std::string> names) {
  AggregationMap T;
  T.n_bus = static_cast<Eigen::Index>(region_of.size());
  T.n_regions = n_regions;
  if (T.n_bus < 1) throw InputError("aggregation needs at least one bus");
  if (n_regions < 1 || n_regions > T.n_bus) throw InputError("region count must be in [1, n_bus]");
  std::vector<int> count(static_cast<size_t>(n_regions), 0);
  for (Eigen::Index i = 0; i < T.n_bus; ++i) {
    const Eigen::Index r = region_of[static_cast<size_t>(i)];
    if (r < 0 || r >= n_regions)
      throw InputError("bus position " + std::to_string(i) + " assigned to invalid region");
    ++count[static_cast<size_t>(r)];
  }
  for (Eigen::Index r = 0; r < n_regions; ++r)
    if (count[static_cast<size_t>(r)] == 0) throw InputError("region " + std::to_string(r) + " is empty");
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != n_regions)
    throw InputError("region name count differs from region count");
  T.region_of = std::move(region_of);
  T.names = std::move(names);
  return T;
}

AggregationMap AggregationMap::identity(Eigen::Index n_bus) {
  std::vector<Eigen::Index> r(static_cast<size_t>(n_bus));
  for (Eigen::Index i = 0; i < n_bus; ++i) r[static_cast<size_t>(i)] = i;
  return from_assignment(std::move(r), n_bus);
}

Eigen::MatrixXd AggregationMap::matrix() const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n_regions, n_bus);
  for (Eigen::Index i = 0; i < n_bus; ++i) M(region_of[static_cast<size_t>(i)], i) = 1.0;
  return M;
}

std::vector<Eigen::Index> AggregationMap::members(Eigen::Index region) const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < n_bus; ++i)
    if (region_of[static_cast<size_t>(i)] == region) out.push_back(i);
  return out;
}

Eigen::VectorXd apply_map(const AggregationMap& T, const Eigen::VectorXd& x) {
  if (x.size() != T.n_bus) throw InputError("injection length does not match aggregation");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(T.n_regions);
  for (Eigen::Index i = 0; i < T.n_bus; ++i) y(T.region_of[static_cast<size_t>(i)]) += x(i);
  return y;
}

Eigen::Index default_row_cap() {
  if (const char* env = std::getenv("GRIDHULL_ROW_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<Eigen::Index>(v);
  }
  return 100000;
}

Polyhedron image_exact(const Polyhedron& P, const Eigen::MatrixXd& M, Eigen::Index row_cap) {
  const Eigen::Index n = P.dim();
  const Eigen::Index k = M.rows();
  if (M.cols() != n) throw InputError("map column count differs from polyhedron dimension");
  if (k < 1) throw InputError("map has no rows");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) throw InputError("map must have full row rank");

  // Basic columns: prefer the earliest column that raises the rank.
  std::vector<Eigen::Index> basic, other;
  Eigen::MatrixXd picked(k, 0);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (static_cast<Eigen::Index>(basic.size()) < k) {
      Eigen::MatrixXd trial(k, picked.cols() + 1);
      trial << picked, M.col(j);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
      lu.setThreshold(1e-10);
      if (lu.rank() == trial.cols()) {
        picked = std::move(trial);
        basic.push_back(j);
        continue;
      }
    }
    other.push_back(j);
  }
  const Eigen::MatrixXd MBinv = picked.inverse();
  const Eigen::Index r = n - k;
  // x = S y + R z.
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, k);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, r);
  Eigen::MatrixXd MN(k, r);
  for (Eigen::Index j = 0; j < r; ++j) MN.col(j) = M.col(other[static_cast<size_t>(j)]);
  const Eigen::MatrixXd RB = -MBinv * MN;
  for (Eigen::Index i = 0; i < k; ++i) {
    S.row(basic[static_cast<size_t>(i)]) = MBinv.row(i);
    R.row(basic[static_cast<size_t>(i)]) = RB.row(i);
  }
  for (Eigen::Index j = 0; j < r; ++j) R(other[static_cast<size_t>(j)], j) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (std::abs(S(i, j)) < kCoefTol) S(i, j) = 0.0;

  System s;
  s.ny = k;
  s.A.resize(P.num_ineq(), k + r);
  s.A << P.A() * S, P.A() * R;
  s.b = P.b();
  s.E.resize(P.num_eq(), k + r);
  s.E << P.E() * S, P.E() * R;
  s.f = P.f();

  eliminate_equalities(s);
  normalize_rows(s.A, s.b);
  if (is_empty(as_polyhedron(s))) return Polyhedron::empty(k);
  s = from_polyhedron(remove_redundancy(as_polyhedron(s)), k);

  while (s.nz() > 0) {
    Eigen::Index best = -1;
    long long best_cost = std::numeric_limits<long long>::max();
    for (Eigen::Index j = 0; j < s.nz(); ++j) {
      long long p = 0, q = 0;
      for (Eigen::Index i = 0; i < s.A.rows(); ++i) {
        const double v = s.A(i, k + j);
        if (v > kCoefTol) ++p;
        else if (v < -kCoefTol) ++q;
      }
      const long long cost = p * q - p - q;
      if (cost < best_cost) {
        best_cost = cost;
        best = j;
      }
    }
    fm_step(s, k + best, row_cap);
    const Polyhedron reduced = remove_redundancy(as_polyhedron(s));
    if (reduced.num_ineq() == 1 && reduced.A().row(0).isZero() && reduced.b()(0) < 0)
      return Polyhedron::empty(k);
    s = from_polyhedron(reduced, k);
  }
  return remove_redundancy(as_polyhedron(s));
}

Polyhedron image_exact(const Polyhedron& P, const AggregationMap& T, Eigen::Index row_cap) {
  if (P.dim() != T.n_bus) throw InputError("aggregation size differs from polyhedron dimension");
  if (T.n_bus > 12)
    std::cerr << "warning: exact projection of " << T.n_bus << " variables may be slow\n";
  return image_exact(P, T.matrix(), row_cap);
}

PolyhedronImageOracle::PolyhedronImageOracle(Polyhedron P, Eigen::MatrixXd M)
    : P_(std::move(P)), M_(std::move(M)) {
  if (M_.cols() != P_.dim()) throw InputError("map column count differs from polyhedron dimension");
}

SupportResult PolyhedronImageOracle::support(const Eigen::VectorXd& d) const {
  if (d.size() != M_.rows()) throw InputError("direction length differs from image dimension");
  const SupportResult r = gridhull::support(P_, M_.transpose() * d);
  SupportResult out;
  out.status = r.status;
  if (r.status == lp::Status::Optimal) {
    out.maximizer = M_ * r.maximizer;
    out.value = d.dot(out.maximizer);
  }
  return out;
}

Polyhedron hull_hrep(const std::vector<Eigen::VectorXd>& points, Eigen::Index dim) {
  if (points.empty()) throw InputError("hull of an empty point set");
  const double scale = scale_of(points);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  for (const auto& p : points) c += p;
  c /= static_cast<double>(points.size());
  Eigen::MatrixXd X(dim, static_cast<Eigen::Index>(points.size()));
  for (size_t i = 0; i < points.size(); ++i) X.col(static_cast<Eigen::Index>(i)) = points[i] - c;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeFullU);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * scale) ++rank;
  if (rank > 3) throw InputError("hull_hrep: point cloud spans " + std::to_string(rank) + " dimensions");
  const Eigen::MatrixXd U = svd.matrixU().leftCols(rank);
  const Eigen::MatrixXd Uc = svd.matrixU().rightCols(dim - rank);

  Eigen::MatrixXd E = Uc.transpose();
  Eigen::VectorXd f = Uc.transpose() * c;
  if (rank == 0) return Polyhedron(Eigen::MatrixXd(0, dim), Eigen::VectorXd(0), E, f);

  std::vector<Eigen::VectorXd> z;
  z.reserve(points.size());
  for (const auto& p : points) z.push_back(U.transpose() * (p - c));
  const auto facets = hull_facets(z, rank, 1e-9 * scale);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(facets.size()), dim);
  Eigen::VectorXd b(static_cast<Eigen::Index>(facets.size()));
  for (size_t i = 0; i < facets.size(); ++i) {
    const Eigen::VectorXd a = U * facets[i].normal;
    A.row(static_cast<Eigen::Index>(i)) = a.transpose();
    b(static_cast<Eigen::Index>(i)) = facets[i].rhs + a.dot(c);
  }
  return Polyhedron(std::move(A), std::move(b), std::move(E), std::move(f));
}

double gap_estimate(const ApproxSet& a) {
  if (a.inner_vertices.empty()) throw InputError("gap_estimate: inner set is empty");
  std::vector<Eigen::VectorXd> dirs;
  for (Eigen::Index i = 0; i < a.outer.num_ineq(); ++i) dirs.push_back(a.outer.A().row(i).transpose());
  if (a.has_inner_hrep)
    for (Eigen::Index i = 0; i < a.inner.num_ineq(); ++i) dirs.push_back(a.inner.A().row(i).transpose());
  double gap = 0.0;
  for (auto d : dirs) {
    const double nr = d.norm();
    if (nr < 1e-14) continue;
    d /= nr;
    const SupportResult so = support(a.outer, d);
    if (so.status == lp::Status::Unbounded) return std::numeric_limits<double>::infinity();
    if (so.status != lp::Status::Optimal) continue;
    gap = std::max(gap, so.value - max_dot(a.inner_vertices, d));
  }
  return gap;
}

ApproxSet image_approx(const SupportOracle& oracle, const ApproxOptions& opt) {
  const Eigen::Index k = oracle.dim();
  if (k < 1) throw InputError("image dimension must be >= 1");
  if (opt.budget < 1) throw InputError("direction budget must be >= 1");
  if (!(opt.tol > 0.0)) throw InputError("tolerance must be positive");

  ApproxSet out;
  out.dim = k;
  std::vector<Eigen::VectorXd>& verts = out.inner_vertices;
  double scale = 1.0;

  auto query = [&](const Eigen::VectorXd& d) {
    const SupportResult r = oracle.support(d);
    if (r.status == lp::Status::Unbounded)
      throw UnboundedError("image is unbounded in direction " + fmt_vec(d));
    if (r.status != lp::Status::Optimal) throw InputError("image of an empty set");
    out.directions.push_back(d);
    out.support_values.push_back(r.value);
    scale = std::max(scale, r.maximizer.cwiseAbs().maxCoeff());
    bool fresh = true;
    for (const auto& v : verts)
      if ((v - r.maximizer).norm() <= 1e-7 * scale) fresh = false;
    if (fresh) verts.push_back(r.maximizer);
  };
  auto budget_left = [&]() { return static_cast<int>(out.directions.size()) < opt.budget; };
  auto queried = [&](const Eigen::VectorXd& d) {
    for (const auto& q : out.directions)
      if ((q - d).norm() < 1e-9) return true;
    return false;
  };

  // Axis directions, then the all-ones pair to expose a balance equality.
  std::vector<Eigen::VectorXd> eq_normals;
  std::vector<double> eq_rhs;
  for (Eigen::Index j = 0; j < k && budget_left(); ++j) {
    for (double s : {1.0, -1.0}) {
      if (!budget_left()) break;
      Eigen::VectorXd d = Eigen::VectorXd::Zero(k);
      d(j) = s;
      query(d);
    }
  }
  if (k >= 2) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k) / std::sqrt(static_cast<double>(k));
    for (double s : {1.0, -1.0})
      if (budget_left()) query(s * ones);
  }
  // Opposite queried directions with matching supports pin an equality.
  for (size_t i = 0; i < out.directions.size(); ++i)
    for (size_t j = i + 1; j < out.directions.size(); ++j)
      if ((out.directions[i] + out.directions[j]).norm() < 1e-12 &&
          out.support_values[i] + out.support_values[j] <= 1e-7 * scale) {
        eq_normals.push_back(out.directions[i]);
        eq_rhs.push_back(out.support_values[i]);
      }
  Eigen::MatrixXd N(static_cast<Eigen::Index>(eq_normals.size()), k);
  for (size_t i = 0; i < eq_normals.size(); ++i) N.row(static_cast<Eigen::Index>(i)) = eq_normals[i].transpose();
  const Eigen::MatrixXd Q = complement_basis(N, k);
  const Eigen::Index free_dim = Q.cols();

  auto rebuild_outer = [&]() {
    // Independent equality rows, then one row per remaining direction.
    Eigen::MatrixXd E(0, k);
    Eigen::VectorXd f(0);
    for (size_t i = 0; i < eq_normals.size(); ++i) {
      Eigen::MatrixXd trial(E.rows() + 1, k);
      trial << E, eq_normals[i].transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
      lu.setThreshold(1e-10);
      if (lu.rank() < trial.rows()) continue;
      E = trial;
      f.conservativeResize(f.size() + 1);
      f(f.size() - 1) = eq_rhs[i];
    }
    std::vector<Eigen::Index> rows;
    for (size_t i = 0; i < out.directions.size(); ++i) {
      bool is_eq = false;
      for (const auto& e : eq_normals)
        if ((out.directions[i] - e).norm() < 1e-12 || (out.directions[i] + e).norm() < 1e-12) is_eq = true;
      if (!is_eq) rows.push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), k);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) {
      const auto& d = out.directions[static_cast<size_t>(rows[r])];
      A.row(static_cast<Eigen::Index>(r)) = d.transpose();
      // Lift by the inner vertices so solver noise cannot break inner ⊆ outer.
      b(static_cast<Eigen::Index>(r)) =
          std::max(out.support_values[static_cast<size_t>(rows[r])], max_dot(verts, d));
    }
    out.outer = Polyhedron(std::move(A), std::move(b), std::move(E), std::move(f));
  };
  auto rebuild_inner = [&]() {
    out.has_inner_hrep = false;
    try {
      out.inner = hull_hrep(verts, k);
      out.has_inner_hrep = true;
    } catch (const InputError&) {
    }
  };

  SphereSequence sphere(std::max<Eigen::Index>(free_dim, 1), opt.seed);
  rebuild_outer();
  rebuild_inner();
  while (budget_left() && free_dim > 0) {
    Eigen::VectorXd next;
    // Refinement: the inner facet with the largest outer overshoot.
    const bool full = out.has_inner_hrep && out.inner.num_eq() <= N.rows() && out.inner.num_ineq() > 0;
    if (opt.refine && full) {
      double worst = -1.0;
      for (Eigen::Index i = 0; i < out.inner.num_ineq(); ++i) {
        Eigen::VectorXd d = out.inner.A().row(i).transpose();
        d = Q * (Q.transpose() * d);
        const double nr = d.norm();
        if (nr < 1e-12) continue;
        d /= nr;
        if (queried(d)) continue;
        const SupportResult so = support(out.outer, d);
        if (so.status != lp::Status::Optimal) continue;
        const double over = so.value - max_dot(verts, d);
        if (over > worst) {
          worst = over;
          next = d;
        }
      }
      if (worst >= 0.0 && worst <= opt.tol) {
        if (gap_estimate(out) <= opt.tol) break;
      }
      if (worst <= opt.tol) next.resize(0);
    }
    for (int tries = 0; next.size() == 0 && tries < 1000; ++tries) {
      next = Q * sphere.next();
      if (queried(next)) next.resize(0);
    }
    if (next.size() == 0) break;
    query(next);
    rebuild_outer();
    rebuild_inner();
  }
  out.gap = gap_estimate(out);
  return out;
}

ApproxSet image_approx(const Polyhedron& P, const AggregationMap& T, const ApproxOptions& opt) {
  if (P.dim() != T.n_bus) throw InputError("aggregation size differs from polyhedron dimension");
  return image_approx(PolyhedronImageOracle(P, T.matrix()), opt);
}

}  // namespace gridhull
