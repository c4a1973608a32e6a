#include "gridhull/lpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gridhull/error.hpp"

namespace gridhull::lp {

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

LpProblem LpProblem::with_dim(Eigen::Index n) {
  LpProblem p;
  p.objective = Eigen::VectorXd::Zero(n);
  p.A.resize(0, n);
  p.b.resize(0);
  p.E.resize(0, n);
  p.f.resize(0);
  return p;
}

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-10;
constexpr double kZeroRow = 1e-14;
constexpr long kMaxIterations = 2'000'000;

void validate(const LpProblem& p) {
  const Eigen::Index n = p.objective.size();
  if (n < 1) throw InputError("LP needs at least one variable");
  if (p.A.rows() > 0 && p.A.cols() != n)
    throw InputError("LP inequality matrix has " + std::to_string(p.A.cols()) +
                     " columns, expected " + std::to_string(n));
  if (p.E.rows() > 0 && p.E.cols() != n)
    throw InputError("LP equality matrix has " + std::to_string(p.E.cols()) +
                     " columns, expected " + std::to_string(n));
  if (p.b.size() != p.A.rows()) throw InputError("LP inequality rhs length mismatch");
  if (p.f.size() != p.E.rows()) throw InputError("LP equality rhs length mismatch");
  if (!p.objective.allFinite() || !p.A.allFinite() || !p.b.allFinite() || !p.E.allFinite() ||
      !p.f.allFinite())
    throw InputError("LP data contains non-finite coefficients");
}

// Constraint system in standard form  [a, -a, slack] z = rhs >= 0  after row
// normalization and sign flips. Columns: u (n), v (n), slacks (m).
struct StandardForm {
  Eigen::Index n = 0;
  Eigen::Index n_slack = 0;
  Eigen::MatrixXd rows;   // R x (2n + n_slack)
  Eigen::VectorXd rhs;    // R, nonnegative
  std::vector<Eigen::Index> slack_basis;  // per row: slack column usable as basis, or -1
  bool trivially_infeasible = false;
};

StandardForm standardize(const LpProblem& p) {
  StandardForm sf;
  const Eigen::Index n = p.objective.size();
  sf.n = n;

  std::vector<Eigen::Index> ineq_rows, eq_rows;
  std::vector<double> ineq_scale, eq_scale;
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    const double nr = p.A.row(i).norm();
    if (nr < kZeroRow) {
      if (p.b(i) < -kFeasTol) sf.trivially_infeasible = true;
      continue;
    }
    ineq_rows.push_back(i);
    ineq_scale.push_back(1.0 / nr);
  }
  for (Eigen::Index i = 0; i < p.E.rows(); ++i) {
    const double nr = p.E.row(i).norm();
    if (nr < kZeroRow) {
      if (std::abs(p.f(i)) > kFeasTol) sf.trivially_infeasible = true;
      continue;
    }
    eq_rows.push_back(i);
    eq_scale.push_back(1.0 / nr);
  }

  const auto m = static_cast<Eigen::Index>(ineq_rows.size());
  const auto q = static_cast<Eigen::Index>(eq_rows.size());
  sf.n_slack = m;
  const Eigen::Index cols = 2 * n + m;
  sf.rows = Eigen::MatrixXd::Zero(m + q, cols);
  sf.rhs.resize(m + q);
  sf.slack_basis.assign(static_cast<size_t>(m + q), -1);

  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index i = ineq_rows[static_cast<size_t>(r)];
    const double s = ineq_scale[static_cast<size_t>(r)];
    Eigen::RowVectorXd a = p.A.row(i) * s;
    double rhs = p.b(i) * s;
    double sign = 1.0;
    if (rhs < 0) sign = -1.0;
    sf.rows.block(r, 0, 1, n) = sign * a;
    sf.rows.block(r, n, 1, n) = -sign * a;
    sf.rows(r, 2 * n + r) = sign;
    sf.rhs(r) = sign * rhs;
    if (sign > 0) sf.slack_basis[static_cast<size_t>(r)] = 2 * n + r;
  }
  for (Eigen::Index r = 0; r < q; ++r) {
    const Eigen::Index i = eq_rows[static_cast<size_t>(r)];
    const double s = eq_scale[static_cast<size_t>(r)];
    Eigen::RowVectorXd e = p.E.row(i) * s;
    double rhs = p.f(i) * s;
    const double sign = rhs < 0 ? -1.0 : 1.0;
    sf.rows.block(m + r, 0, 1, n) = sign * e;
    sf.rows.block(m + r, n, 1, n) = -sign * e;
    sf.rhs(m + r) = sign * rhs;
  }
  return sf;
}

// Dense tableau simplex. Row `R` of `t_` holds reduced costs, the last column
// holds the right-hand side (negated objective in the cost row). Minimizes.
class Tableau {
 public:
  explicit Tableau(const StandardForm& sf) : sf_(sf) {
    rows_ = sf.rows.rows();
    structural_ = sf.rows.cols();
    std::vector<Eigen::Index> need_art;
    for (Eigen::Index r = 0; r < rows_; ++r)
      if (sf.slack_basis[static_cast<size_t>(r)] < 0) need_art.push_back(r);
    n_art_ = static_cast<Eigen::Index>(need_art.size());
    cols_ = structural_ + n_art_;
    t_ = Eigen::MatrixXd::Zero(rows_ + 1, cols_ + 1);
    t_.block(0, 0, rows_, structural_) = sf.rows;
    t_.block(0, cols_, rows_, 1) = sf.rhs;
    basis_.assign(static_cast<size_t>(rows_), -1);
    for (Eigen::Index r = 0; r < rows_; ++r) basis_[static_cast<size_t>(r)] = sf.slack_basis[static_cast<size_t>(r)];
    for (Eigen::Index k = 0; k < n_art_; ++k) {
      const Eigen::Index r = need_art[static_cast<size_t>(k)];
      t_(r, structural_ + k) = 1.0;
      basis_[static_cast<size_t>(r)] = structural_ + k;
    }
    rhs_scale_ = std::max(1.0, sf.rhs.size() ? sf.rhs.cwiseAbs().maxCoeff() : 0.0);
    kept_rows_.resize(static_cast<size_t>(rows_));
    for (Eigen::Index r = 0; r < rows_; ++r) kept_rows_[static_cast<size_t>(r)] = r;
  }

  // Returns the phase-1 optimum (sum of artificials).
  double phase_one() {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols_);
    for (Eigen::Index k = 0; k < n_art_; ++k) cost(structural_ + k) = 1.0;
    load_costs(cost);
    active_cols_ = cols_;
    run();
    return -t_(rows_, cols_);
  }

  bool phase_one_feasible(double value) const { return value <= kFeasTol * rhs_scale_; }

  // Pivot artificials out of the basis; drop rows that are linearly dependent.
  void purge_artificials() {
    for (Eigen::Index r = 0; r < rows_;) {
      if (basis_[static_cast<size_t>(r)] < structural_) {
        ++r;
        continue;
      }
      Eigen::Index best = -1;
      double best_abs = 1e-9;
      for (Eigen::Index j = 0; j < structural_; ++j) {
        if (is_basic(j)) continue;
        const double a = std::abs(t_(r, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) {
        pivot(r, best);
        ++r;
      } else {
        remove_row(r);
      }
    }
    active_cols_ = structural_;
  }

  // Returns false when unbounded.
  bool phase_two(const Eigen::VectorXd& structural_cost) {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols_);
    cost.head(structural_) = structural_cost;
    load_costs(cost);
    return run();
  }

  Eigen::VectorXd structural_solution() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(structural_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const Eigen::Index j = basis_[static_cast<size_t>(r)];
      if (j < structural_) z(j) = std::max(0.0, t_(r, cols_));
    }
    return z;
  }

  // Recompute basic values from the original columns; more accurate than the
  // accumulated tableau for badly scaled data.
  Eigen::VectorXd refined_solution() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(structural_);
    if (rows_ == 0) return z;
    for (Eigen::Index r = 0; r < rows_; ++r)
      if (basis_[static_cast<size_t>(r)] >= structural_) return structural_solution();
    Eigen::VectorXd rhs(rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) rhs(r) = sf_.rhs(kept_rows_[static_cast<size_t>(r)]);
    Eigen::MatrixXd Bk(rows_, rows_);
    for (Eigen::Index r = 0; r < rows_; ++r)
      for (Eigen::Index c = 0; c < rows_; ++c)
        Bk(r, c) = sf_.rows(kept_rows_[static_cast<size_t>(r)], basis_[static_cast<size_t>(c)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Bk);
    if (!lu.isInvertible()) return structural_solution();
    Eigen::VectorXd zb = lu.solve(rhs);
    if (!zb.allFinite()) return structural_solution();
    for (Eigen::Index r = 0; r < rows_; ++r) z(basis_[static_cast<size_t>(r)]) = std::max(0.0, zb(r));
    return z;
  }

 private:
  void load_costs(const Eigen::VectorXd& cost) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(cols_) = cost.transpose();
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const double cb = cost(basis_[static_cast<size_t>(r)]);
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(r);
    }
  }

  bool is_basic(Eigen::Index j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const double pv = t_(r, c);
    t_.row(r) /= pv;
    t_(r, c) = 1.0;
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double factor = t_(i, c);
      if (factor != 0.0) {
        t_.row(i) -= factor * t_.row(r);
        t_(i, c) = 0.0;
      }
    }
    basis_[static_cast<size_t>(r)] = c;
  }

  void remove_row(Eigen::Index r) {
    const Eigen::Index last = rows_;  // cost row index
    Eigen::MatrixXd nt(rows_, cols_ + 1);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i <= last; ++i) {
      if (i == r) continue;
      nt.row(k++) = t_.row(i);
    }
    t_ = std::move(nt);
    basis_.erase(basis_.begin() + r);
    kept_rows_.erase(kept_rows_.begin() + r);
    --rows_;
  }

  // Bland's rule: lowest-index improving column, ratio ties broken by the
  // lowest basic variable index.
  bool run() {
    for (long it = 0; it < kMaxIterations; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < active_cols_; ++j) {
        if (t_(rows_, j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < rows_; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, t_(r, cols_)) / a;
        const double slack = leave < 0 ? 0.0 : 1e-12 * std::max(1.0, best_ratio);
        if (leave < 0 || ratio < best_ratio - slack) {
          best_ratio = ratio;
          leave = r;
        } else if (ratio <= best_ratio + slack && leave >= 0 &&
                   basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)]) {
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

  const StandardForm& sf_;
  Eigen::Index rows_ = 0;
  Eigen::Index structural_ = 0;
  Eigen::Index n_art_ = 0;
  Eigen::Index cols_ = 0;
  Eigen::Index active_cols_ = 0;
  double rhs_scale_ = 1.0;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  // Original standard-form row index of each tableau row.
  std::vector<Eigen::Index> kept_rows_;
};

Eigen::VectorXd to_x(const StandardForm& sf, const Eigen::VectorXd& z) {
  return z.head(sf.n) - z.segment(sf.n, sf.n);
}

}  // namespace

double max_violation(const LpProblem& p, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    const double nr = p.A.row(i).norm();
    const double r = p.A.row(i).dot(x) - p.b(i);
    worst = std::max(worst, nr > kZeroRow ? r / nr : r);
  }
  for (Eigen::Index i = 0; i < p.E.rows(); ++i) {
    const double nr = p.E.row(i).norm();
    const double r = std::abs(p.E.row(i).dot(x) - p.f(i));
    worst = std::max(worst, nr > kZeroRow ? r / nr : r);
  }
  return worst;
}

LpResult solve(const LpProblem& p) {
  validate(p);
  LpResult res;
  const StandardForm sf = standardize(p);
  if (sf.trivially_infeasible) return res;

  Tableau tab(sf);
  if (!tab.phase_one_feasible(tab.phase_one())) return res;
  tab.purge_artificials();

  const Eigen::Index n = sf.n;
  Eigen::VectorXd c = p.objective;
  const double cscale = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  if (cscale > 0) c /= cscale;
  if (p.sense == Sense::Maximize) c = -c;
  Eigen::VectorXd structural_cost = Eigen::VectorXd::Zero(2 * n + sf.n_slack);
  structural_cost.head(n) = c;
  structural_cost.segment(n, n) = -c;

  if (!tab.phase_two(structural_cost)) {
    res.status = Status::Unbounded;
    return res;
  }
  Eigen::VectorXd x_tab = to_x(sf, tab.structural_solution());
  Eigen::VectorXd x_ref = to_x(sf, tab.refined_solution());
  Eigen::VectorXd x = max_violation(p, x_ref) <= max_violation(p, x_tab) ? x_ref : x_tab;
  res.status = Status::Optimal;
  res.value = p.objective.dot(x);
  res.point = std::move(x);
  return res;
}

bool feasible(const LpProblem& p) {
  validate(p);
  const StandardForm sf = standardize(p);
  if (sf.trivially_infeasible) return false;
  Tableau tab(sf);
  return tab.phase_one_feasible(tab.phase_one());
}

}  // namespace gridhull::lp
