#include <Highs.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gridhull/error.hpp"
#include "gridhull/lpsolve.hpp"

namespace gridhull::lp {

namespace {

double highs_bound(double v) {
  if (v == std::numeric_limits<double>::infinity()) return kHighsInf;
  if (v == -std::numeric_limits<double>::infinity()) return -kHighsInf;
  return v;
}

void validate(const SparseLp& p) {
  const Eigen::Index n = p.cost.size();
  if (n < 1) throw InputError("LP needs at least one variable");
  if (p.col_lower.size() != n || p.col_upper.size() != n)
    throw InputError("sparse LP column bound length mismatch");
  if (p.M.cols() != n) throw InputError("sparse LP matrix column count mismatch");
  if (p.row_lower.size() != p.M.rows() || p.row_upper.size() != p.M.rows())
    throw InputError("sparse LP row bound length mismatch");
}

}  // namespace

LpResult solve(const SparseLp& p) {
  validate(p);
  if ((p.col_lower.array() > p.col_upper.array()).any() || (p.row_lower.array() > p.row_upper.array()).any())
    return {};
  Eigen::SparseMatrix<double, Eigen::ColMajor> M = p.M;
  M.makeCompressed();

  HighsLp model;
  model.num_col_ = static_cast<HighsInt>(M.cols());
  model.num_row_ = static_cast<HighsInt>(M.rows());
  model.sense_ = p.sense == Sense::Maximize ? ObjSense::kMaximize : ObjSense::kMinimize;
  model.col_cost_.assign(p.cost.data(), p.cost.data() + p.cost.size());
  model.col_lower_.resize(static_cast<size_t>(M.cols()));
  model.col_upper_.resize(static_cast<size_t>(M.cols()));
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    model.col_lower_[static_cast<size_t>(j)] = highs_bound(p.col_lower(j));
    model.col_upper_[static_cast<size_t>(j)] = highs_bound(p.col_upper(j));
  }
  model.row_lower_.resize(static_cast<size_t>(M.rows()));
  model.row_upper_.resize(static_cast<size_t>(M.rows()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    model.row_lower_[static_cast<size_t>(i)] = highs_bound(p.row_lower(i));
    model.row_upper_[static_cast<size_t>(i)] = highs_bound(p.row_upper(i));
  }
  model.a_matrix_.format_ = MatrixFormat::kColwise;
  model.a_matrix_.num_col_ = model.num_col_;
  model.a_matrix_.num_row_ = model.num_row_;
  model.a_matrix_.start_.assign(M.outerIndexPtr(), M.outerIndexPtr() + M.cols() + 1);
  model.a_matrix_.index_.assign(M.innerIndexPtr(), M.innerIndexPtr() + M.nonZeros());
  model.a_matrix_.value_.assign(M.valuePtr(), M.valuePtr() + M.nonZeros());

  Highs highs;
  highs.setOptionValue("output_flag", false);
  highs.setOptionValue("threads", 1);
  highs.setOptionValue("random_seed", 0);
  highs.setOptionValue("solver", "simplex");
  if (highs.passModel(model) == HighsStatus::kError) throw InputError("sparse LP rejected by solver");
  highs.run();

  // Fallbacks when the dual simplex stops without a verdict.
  auto settled = [&] {
    const HighsModelStatus s = highs.getModelStatus();
    return s == HighsModelStatus::kOptimal || s == HighsModelStatus::kInfeasible ||
           s == HighsModelStatus::kUnbounded || s == HighsModelStatus::kUnboundedOrInfeasible;
  };
  if (!settled()) {
    highs.clearSolver();
    highs.setOptionValue("simplex_strategy", 4);
    highs.run();
  }
  if (!settled()) {
    highs.clearSolver();
    highs.setOptionValue("solver", "ipm");
    highs.setOptionValue("run_crossover", "on");
    highs.run();
  }

  LpResult res;
  HighsModelStatus ms = highs.getModelStatus();
  if (ms == HighsModelStatus::kUnboundedOrInfeasible) {
    // Disambiguate with a zero objective.
    highs.changeObjectiveSense(ObjSense::kMinimize);
    for (HighsInt j = 0; j < model.num_col_; ++j) highs.changeColCost(j, 0.0);
    highs.setOptionValue("presolve", "off");
    highs.run();
    res.status = highs.getModelStatus() == HighsModelStatus::kOptimal ? Status::Unbounded
                                                                      : Status::Infeasible;
    return res;
  }
  switch (ms) {
    case HighsModelStatus::kOptimal: {
      res.status = Status::Optimal;
      const auto& col = highs.getSolution().col_value;
      Eigen::VectorXd x(model.num_col_);
      for (HighsInt j = 0; j < model.num_col_; ++j) x(j) = col[static_cast<size_t>(j)];
      res.value = p.cost.dot(x);
      res.point = std::move(x);
      return res;
    }
    case HighsModelStatus::kInfeasible: res.status = Status::Infeasible; return res;
    case HighsModelStatus::kUnbounded: res.status = Status::Unbounded; return res;
    default:
      throw std::runtime_error("sparse LP solver failed: " + highs.modelStatusToString(ms));
  }
}

}  // namespace gridhull::lp
