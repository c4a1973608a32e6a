#include "gridhull/capacity.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gridhull/error.hpp"
#include "gridhull/setdiff.hpp"

namespace gridhull {

namespace {

// Minimum k over {x in PG, Cf x <= n k, sign * h x >= limit}.
double scaling_lp(const NetworkModel& net, const Eigen::MatrixXd& Cf, const Eigen::VectorXd& nominal,
                  const Eigen::RowVectorXd& h, int sign, double limit) {
  const Eigen::Index n = net.n_bus();
  const Eigen::Index c = Cf.rows();
  auto p = lp::LpProblem::with_dim(n + 1);
  p.sense = lp::Sense::Minimize;
  p.objective(n) = 1.0;
  p.A = Eigen::MatrixXd::Zero(c + 2 * n + 1, n + 1);
  p.b = Eigen::VectorXd::Zero(c + 2 * n + 1);
  p.A.topLeftCorner(c, n) = Cf;
  p.A.col(n).head(c) = -nominal;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Bus& bus = net.buses[static_cast<size_t>(i)];
    p.A(c + i, i) = 1.0;
    p.b(c + i) = bus.gen_max - bus.demand;
    p.A(c + n + i, i) = -1.0;
    p.b(c + n + i) = bus.demand;
  }
  p.A.row(c + 2 * n).head(n) = -static_cast<double>(sign) * h;
  p.b(c + 2 * n) = -limit;
  p.E = Eigen::MatrixXd::Zero(1, n + 1);
  p.E.row(0).head(n).setOnes();
  p.f = Eigen::VectorXd::Zero(1);
  const lp::LpResult r = lp::solve(p);
  if (r.status == lp::Status::Infeasible) return kInfinity;
  if (r.status == lp::Status::Unbounded) return -kInfinity;
  return r.value;
}

void check_nominal(const NtcSpec& spec) {
  if (spec.nominal.size() != static_cast<Eigen::Index>(spec.corridors.size()))
    throw InputError("nominal direction length differs from corridor count");
  if ((spec.nominal.array() < 0.0).any() || !(spec.nominal.maxCoeff() > 0.0))
    throw InputError("nominal direction must be nonnegative with a positive entry");
}

NtcResult max_scaling(const NetworkModel& net, const NtcSpec& spec, const Eigen::MatrixXd& H) {
  check_nominal(spec);
  const Eigen::MatrixXd Cf = corridor_matrix(net, spec) * H;
  NtcResult out;
  for (Eigen::Index l = 0; l < net.n_line(); ++l) {
    for (int sign : {1, -1}) {
      const double k = scaling_lp(net, Cf, spec.nominal, H.row(l), sign, net.lines[static_cast<size_t>(l)].limit);
      if (k == -kInfinity)
        throw DataError("line " + std::to_string(net.lines[static_cast<size_t>(l)].id) +
                        " can exceed its limit for every NTC scaling");
      out.table.push_back(LineScaling{l, sign, k});
      if (k < out.k_star) {
        out.k_star = k;
        out.binding_line = l;
        out.binding_sign = sign;
      }
    }
  }
  if (std::isfinite(out.k_star)) out.bounds = out.k_star * spec.nominal;
  return out;
}

Eigen::VectorXd balanced(const Eigen::VectorXd& y, double tol) {
  const double s = y.sum();
  if (std::abs(s) > tol) {
    std::ostringstream os;
    os << "region injections are unbalanced by " << s << " MW";
    throw InputError(os.str());
  }
  return y.array() - s / static_cast<double>(y.size());
}

}  // namespace

void validate(const NetworkModel& net, const NtcSpec& spec, bool need_bounds) {
  const auto c = static_cast<Eigen::Index>(spec.corridors.size());
  for (const auto& cor : spec.corridors) {
    if (cor.terms.empty()) throw InputError("corridor '" + cor.name + "' has no lines");
    for (const auto& [id, coef] : cor.terms) {
      net.line_index(id);
      if (coef != 1.0 && coef != -1.0) throw InputError("corridor '" + cor.name + "': coefficients must be +1 or -1");
    }
  }
  if (need_bounds) {
    if (spec.bounds.size() != c) throw InputError("NTC bound count differs from corridor count");
    if (!spec.bounds.allFinite()) throw InputError("NTC bounds must be finite");
  }
  if (spec.weights.size() != 0 && spec.weights.size() != c)
    throw InputError("weight count differs from corridor count");
}

Eigen::MatrixXd corridor_matrix(const NetworkModel& net, const NtcSpec& spec) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.corridors.size()), net.n_line());
  for (size_t c = 0; c < spec.corridors.size(); ++c)
    for (const auto& [id, coef] : spec.corridors[c].terms) T(static_cast<Eigen::Index>(c), net.line_index(id)) += coef;
  return T;
}

Polyhedron ntc_polyhedron(const NetworkModel& net, const NtcSpec& spec) {
  validate(net, spec, true);
  const Polyhedron pg = generator_polyhedron(net);
  if (spec.corridors.empty()) return pg;
  const Eigen::MatrixXd Cf = corridor_matrix(net, spec) * isf_matrix(net);
  return intersect(pg, Polyhedron(Cf, spec.bounds));
}

double ntc_line_scaling(const NetworkModel& net, const NtcSpec& spec, Eigen::Index line, int sign) {
  validate(net, spec, false);
  check_nominal(spec);
  if (line < 0 || line >= net.n_line()) throw InputError("line position out of range");
  if (sign != 1 && sign != -1) throw InputError("sign must be +1 or -1");
  const Eigen::MatrixXd H = isf_matrix(net);
  const double k = scaling_lp(net, corridor_matrix(net, spec) * H, spec.nominal, H.row(line), sign,
                              net.lines[static_cast<size_t>(line)].limit);
  if (k == -kInfinity)
    throw DataError("line " + std::to_string(net.lines[static_cast<size_t>(line)].id) +
                    " can exceed its limit for every NTC scaling");
  return k;
}

NtcResult ntc_max_scaling(const NetworkModel& net, const NtcSpec& spec) {
  validate(net, spec, false);
  return max_scaling(net, spec, isf_matrix(net));
}

NtcSpec ntc_direction_search(const NetworkModel& net, const NtcSpec& corridors, int samples, unsigned seed) {
  validate(net, corridors, false);
  if (samples < 1) throw InputError("sample count must be >= 1");
  const auto c = static_cast<Eigen::Index>(corridors.corridors.size());
  if (c == 0) throw InputError("direction search needs at least one corridor");
  const Eigen::VectorXd w = corridors.weights.size() ? corridors.weights : Eigen::VectorXd::Ones(c);
  const Eigen::MatrixXd H = isf_matrix(net);
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  NtcSpec best = corridors;
  best.weights = w;
  double best_obj = -kInfinity;
  bool found = false;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd n(c);
    do {
      for (Eigen::Index j = 0; j < c; ++j) n(j) = std::abs(normal(rng));
    } while (!(n.norm() > 1e-12));
    n /= n.norm();
    NtcSpec trial = corridors;
    trial.nominal = n;
    const NtcResult r = max_scaling(net, trial, H);
    if (!std::isfinite(r.k_star)) continue;
    const double obj = w.dot(r.bounds);
    if (!found || obj > best_obj) {
      found = true;
      best_obj = obj;
      best.nominal = n;
      best.bounds = r.bounds;
    }
  }
  if (!found) throw DataError("no sampled direction is limited by any line; NTC is unconstrained");
  return best;
}

NtcVerification verify_ntc(const NetworkModel& net, const NtcSpec& spec, double eps_strict) {
  validate(net, spec, true);
  const Eigen::MatrixXd H = isf_matrix(net);
  const Polyhedron base = spec.corridors.empty()
                              ? generator_polyhedron(net)
                              : intersect(generator_polyhedron(net), Polyhedron(corridor_matrix(net, spec) * H, spec.bounds));
  NtcVerification out;
  for (Eigen::Index l = 0; l < net.n_line(); ++l) {
    for (int sign : {1, -1}) {
      const double lim = net.lines[static_cast<size_t>(l)].limit;
      const Polyhedron P = base.with_row(-static_cast<double>(sign) * H.row(l), -(lim + eps_strict));
      if (!is_empty(P)) {
        out.safe = false;
        out.violations.emplace_back(l, sign);
      }
    }
  }
  return out;
}

Polyhedron generator_image(const NetworkModel& net, const AggregationMap& agg) {
  validate(net);
  if (agg.n_bus != net.n_bus()) throw InputError("aggregation size differs from bus count");
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(agg.n_regions), hi = lo;
  for (Eigen::Index i = 0; i < net.n_bus(); ++i) {
    const Bus& b = net.buses[static_cast<size_t>(i)];
    lo(agg.region_of[static_cast<size_t>(i)]) -= b.demand;
    hi(agg.region_of[static_cast<size_t>(i)]) += b.gen_max - b.demand;
  }
  const Polyhedron box = Polyhedron::box(lo, hi);
  return box.with_equality(Eigen::RowVectorXd::Ones(agg.n_regions), 0.0);
}

MappedSets mapped_sets(const NetworkModel& net, const AggregationMap& agg, const NtcSpec* spec) {
  if (agg.n_bus != net.n_bus()) throw InputError("aggregation size differs from bus count");
  const Polyhedron pg = generator_polyhedron(net);
  MappedSets out{image_exact(pg, agg), image_exact(intersect(pg, line_polyhedron(net)), agg), std::nullopt};
  if (spec) out.pntc = image_exact(ntc_polyhedron(net, *spec), agg);
  return out;
}

std::vector<Polyhedron> violation_images(const NetworkModel& net, const AggregationMap& agg) {
  if (agg.n_bus != net.n_bus()) throw InputError("aggregation size differs from bus count");
  const Polyhedron pg = generator_polyhedron(net);
  const Eigen::MatrixXd H = isf_matrix(net);
  std::vector<Polyhedron> out;
  for (Eigen::Index l = 0; l < net.n_line(); ++l) {
    for (int sign : {1, -1}) {
      const double lim = net.lines[static_cast<size_t>(l)].limit;
      const Polyhedron V = pg.with_row(-static_cast<double>(sign) * H.row(l), -lim);
      if (is_empty(V)) continue;
      const Polyhedron img = image_exact(V, agg);
      if (!is_empty(img)) out.push_back(img);
    }
  }
  return out;
}

PolyUnion strong_feasible_set(const NetworkModel& net, const AggregationMap& agg) {
  const Polyhedron pgt = image_exact(generator_polyhedron(net), agg);
  return region_diff(pgt, violation_images(net, agg));
}

FeasibilityReport check_feasible(const NetworkModel& net, const AggregationMap& agg, const Eigen::VectorXd& y,
                                 double tol) {
  if (agg.n_bus != net.n_bus()) throw InputError("aggregation size differs from bus count");
  if (y.size() != agg.n_regions) throw InputError("region vector length differs from region count");
  const Eigen::VectorXd yb = balanced(y, tol);
  const Eigen::MatrixXd T = agg.matrix();
  const Eigen::MatrixXd H = isf_matrix(net);
  Polyhedron fiber = generator_polyhedron(net);
  for (Eigen::Index j = 0; j < T.rows(); ++j) fiber = fiber.with_equality(T.row(j), yb(j));

  FeasibilityReport rep;
  lp::LpProblem p = intersect(fiber, line_polyhedron(net)).as_lp();
  const lp::LpResult r = lp::solve(p);
  if (r.optimal()) {
    rep.feasible = true;
    rep.witness = *r.point;
  }
  if (is_empty(fiber)) return rep;

  rep.strongly_feasible = true;
  double worst_excess = -kInfinity;
  for (Eigen::Index l = 0; l < net.n_line(); ++l) {
    for (int sign : {1, -1}) {
      const SupportResult s = support(fiber, static_cast<double>(sign) * H.row(l).transpose());
      if (s.status != lp::Status::Optimal) continue;
      const Line& line = net.lines[static_cast<size_t>(l)];
      const double excess = s.value - line.limit;
      if (excess > tol) rep.strongly_feasible = false;
      if (excess > worst_excess) {
        worst_excess = excess;
        rep.worst_line = WorstLine{line.id, sign * s.value, line.limit};
      }
    }
  }
  return rep;
}

struct NetworkImageOracle::Impl {
  AggregationMap agg;
  lp::SparseLp base;  // rows: bbus (n), bf (m)
  Eigen::SparseMatrix<double, Eigen::ColMajor> bbus;
  Eigen::SparseMatrix<double, Eigen::ColMajor> region_bbus;  // T * bbus
};

NetworkImageOracle::NetworkImageOracle(const NetworkModel& net, const AggregationMap& agg)
    : impl_(std::make_unique<Impl>()) {
  if (agg.n_bus != net.n_bus()) throw InputError("aggregation size differs from bus count");
  const SparseDc dc = sparse_dc(net);
  const Eigen::Index n = net.n_bus();
  const Eigen::Index m = net.n_line();
  impl_->agg = agg;
  impl_->bbus = dc.bbus;

  lp::SparseLp& s = impl_->base;
  s.cost = Eigen::VectorXd::Zero(n);
  s.col_lower = Eigen::VectorXd::Constant(n, -kInfinity);
  s.col_upper = Eigen::VectorXd::Constant(n, kInfinity);
  s.col_lower(dc.reference) = s.col_upper(dc.reference) = 0.0;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(dc.bbus.nonZeros() + dc.bf.nonZeros()));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(dc.bbus, j); it; ++it) t.emplace_back(it.row(), j, it.value());
    for (Eigen::SparseMatrix<double>::InnerIterator it(dc.bf, j); it; ++it) t.emplace_back(n + it.row(), j, it.value());
  }
  s.M.resize(n + m, n);
  s.M.setFromTriplets(t.begin(), t.end());
  s.M.makeCompressed();
  s.row_lower.resize(n + m);
  s.row_upper.resize(n + m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Bus& b = net.buses[static_cast<size_t>(i)];
    s.row_lower(i) = -b.demand;
    s.row_upper(i) = b.gen_max - b.demand;
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    const double lim = net.lines[static_cast<size_t>(k)].limit;
    s.row_lower(n + k) = -lim;
    s.row_upper(n + k) = lim;
  }
  Eigen::SparseMatrix<double, Eigen::ColMajor> T(agg.n_regions, n);
  std::vector<Eigen::Triplet<double>> tt;
  for (Eigen::Index i = 0; i < n; ++i) tt.emplace_back(agg.region_of[static_cast<size_t>(i)], i, 1.0);
  T.setFromTriplets(tt.begin(), tt.end());
  impl_->region_bbus = T * dc.bbus;
}

NetworkImageOracle::~NetworkImageOracle() = default;

Eigen::Index NetworkImageOracle::dim() const { return impl_->agg.n_regions; }

SupportResult NetworkImageOracle::support(const Eigen::VectorXd& d) const {
  if (d.size() != dim()) throw InputError("direction length differs from region count");
  lp::SparseLp p = impl_->base;
  p.sense = lp::Sense::Maximize;
  p.cost = impl_->region_bbus.transpose() * d;
  const double cmax = p.cost.cwiseAbs().maxCoeff();
  p.cost = p.cost.unaryExpr([&](double c) { return std::abs(c) <= 1e-12 * cmax ? 0.0 : c; });
  const lp::LpResult r = lp::solve(p);
  SupportResult out;
  out.status = r.status;
  if (r.optimal()) {
    out.maximizer = impl_->region_bbus * (*r.point);
    out.value = d.dot(out.maximizer);
  }
  return out;
}

bool NetworkImageOracle::fiber_feasible(const Eigen::VectorXd& y) const {
  if (y.size() != dim()) throw InputError("region vector length differs from region count");
  const Eigen::VectorXd yb = balanced(y, 1e-6);
  const lp::SparseLp& base = impl_->base;
  const Eigen::Index rows = base.M.rows();
  const Eigen::Index k = dim() - 1;  // the last region row is implied by balance
  lp::SparseLp p = base;
  p.cost.setZero();
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index j = 0; j < base.M.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(base.M, j); it; ++it) t.emplace_back(it.row(), j, it.value());
    for (Eigen::SparseMatrix<double>::InnerIterator it(impl_->region_bbus, j); it; ++it)
      if (it.row() < k) t.emplace_back(rows + it.row(), j, it.value());
  }
  p.M.resize(rows + k, base.M.cols());
  p.M.setFromTriplets(t.begin(), t.end());
  p.row_lower.conservativeResize(rows + k);
  p.row_upper.conservativeResize(rows + k);
  p.row_lower.tail(k) = yb.head(k);
  p.row_upper.tail(k) = yb.head(k);
  return lp::solve(p).optimal();
}

AccountResult capacity_account(const CapacityAccount& a) {
  if (a.ttc < 0 || a.trm < 0 || a.ltc < 0 || a.aac < 0) throw InputError("capacity figures must be >= 0");
  AccountResult r;
  r.ntc = a.ttc - a.trm - a.ltc;
  if (r.ntc < 0) {
    r.ntc = 0;
    r.clamped = true;
  }
  r.atc = r.ntc - a.aac;
  if (r.atc < 0) {
    r.atc = 0;
    r.clamped = true;
  }
  return r;
}

}  // namespace gridhull
