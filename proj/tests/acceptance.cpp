#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "gridhull/capacity.hpp"
#include "gridhull/casefmt.hpp"
#include "gridhull/error.hpp"
#include "gridhull/lpsolve.hpp"
#include "gridhull/netmodel.hpp"
#include "gridhull/project.hpp"
#include "gridhull/setdiff.hpp"

using namespace gridhull;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kBand = 1e-6;           // MW, boundary band for probe classification
constexpr double kLineTol = 1e-6;        // MW, per-line support slack
constexpr double kAreaRatio = 1.2;
constexpr double kAreaRel = 0.02;
constexpr double kIsfRel = 1e-9;
constexpr double kRingTol = 1e-12;
constexpr double kDualTol = 1e-7;
constexpr double kCertTol = 1e-9;
constexpr double kInnerOuterTol = 1e-3;  // MW, large-case LP tolerances
constexpr double kSixBusSeconds = 60;
constexpr double kNtcSeconds = 10;
constexpr double kLargeSeconds = 1800;
constexpr double kPolishBoxMw = 3500;

const std::string kData = GRIDHULL_DATA_DIR;

NetworkModel load(const std::string& name) { return parse_network_json(read_file(kData + "/" + name)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double halton(int i, int base) {
  double f = 1, r = 0;
  for (int k = i; k > 0; k /= base) {
    f /= base;
    r += f * (k % base);
  }
  return r;
}

// Quasi-random probes of the balanced reduced space (north, center, south),
// parametrized by north and south over a box.
struct ProbeBox {
  double n0, n1, s0, s1;
  VectorXd at(int i) const {
    const double n = n0 + (n1 - n0) * halton(i + 1, 2);
    const double s = s0 + (s1 - s0) * halton(i + 1, 3);
    return Eigen::Vector3d(n, -n - s, s);
  }
  double area() const { return (n1 - n0) * (s1 - s0); }
};

ProbeBox bounding_box(const Polyhedron& P, double pad) {
  auto h = [&](double n, double s) { return support(P, Eigen::Vector3d(n, 0, s)).value; };
  ProbeBox b{-h(-1, 0), h(1, 0), -h(0, -1), h(0, 1)};
  const double pn = pad * (b.n1 - b.n0), ps = pad * (b.s1 - b.s0);
  return {b.n0 - pn, b.n1 + pn, b.s0 - ps, b.s1 + ps};
}

bool fiber_feasible(const Polyhedron& P, const MatrixXd& T, const VectorXd& y) {
  Polyhedron F = P;
  for (Eigen::Index j = 0; j < T.rows(); ++j) F = F.with_equality(T.row(j), y(j));
  return !is_empty(F);
}

// Largest flow limit excess over {x in PG : T x = y}.
double fiber_worst_excess(const NetworkModel& net, const Polyhedron& pg, const MatrixXd& T, const MatrixXd& isf,
                          const VectorXd& y) {
  Polyhedron F = pg;
  for (Eigen::Index j = 0; j < T.rows(); ++j) F = F.with_equality(T.row(j), y(j));
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 0; l < net.n_line(); ++l)
    for (int s : {1, -1}) {
      const SupportResult r = support(F, s * isf.row(l).transpose());
      if (r.status != lp::Status::Optimal) return std::numeric_limits<double>::quiet_NaN();
      worst = std::max(worst, r.value - net.lines[static_cast<size_t>(l)].limit);
    }
  return worst;
}

bool subset(const Polyhedron& inner, const Polyhedron& outer, double tol) {
  for (Eigen::Index i = 0; i < outer.num_ineq(); ++i) {
    const SupportResult r = support(inner, outer.A().row(i).transpose());
    if (r.status == lp::Status::Infeasible) return true;
    if (r.status != lp::Status::Optimal || r.value > outer.b()(i) + tol * outer.A().row(i).norm()) return false;
  }
  return true;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict six_bus_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = parse_aggregation(read_file(kData + "/sixbus_agg.json"), net);
  const Polyhedron pgpl = intersect(generator_polyhedron(net), line_polyhedron(net));
  const Polyhedron plt = image_exact(pgpl, agg);
  const MatrixXd T = agg.matrix();
  const ProbeBox box = bounding_box(generator_image(net, agg), 0.05);
  int mismatches = 0, banded = 0, inside = 0;
  for (int i = 0; i < 10000; ++i) {
    const VectorXd y = box.at(i);
    const bool outer = contains(plt, y, kBand), inner = contains(plt, y, -kBand);
    if (outer != inner) {
      ++banded;
      continue;
    }
    inside += inner;
    mismatches += fiber_feasible(pgpl, T, y) != inner;
  }
  const double t = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "mismatches=%d inside=%d banded=%d time=%.2fs", mismatches, inside, banded, t);
  return {mismatches == 0 && t < kSixBusSeconds, buf};
}

Verdict ntc_underestimation() {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = parse_aggregation(read_file(kData + "/sixbus_agg.json"), net);
  const NtcSpec base = parse_ntc(read_file(kData + "/sixbus_ntc.json"), net);
  const Polyhedron plt = mapped_sets(net, agg).pl;
  const auto plt_vertices = vertices_2d(plt);
  const ProbeBox box = bounding_box(plt, 0.0);

  auto evaluate = [&](const NtcSpec& spec, const char* label, std::string& out) {
    const Polyhedron pntc = *mapped_sets(net, agg, &spec).pntc;
    long in_l = 0, in_n = 0;
    for (int i = 0; i < 200000; ++i) {
      const VectorXd y = box.at(i);
      in_l += contains(plt, y);
      in_n += contains(pntc, y);
    }
    const double ratio = in_n == 0 ? std::numeric_limits<double>::infinity() : double(in_l) / double(in_n);
    bool outside = false;
    for (const auto& v : plt_vertices) outside = outside || !contains(pntc, v, kBand);
    const bool sub = subset(pntc, plt, kBand);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s: b=(%.1f,%.1f) ratio=%.3f subset=%d vertex_outside=%d; ", label, spec.bounds(0),
                  spec.bounds(1), ratio, sub, outside);
    out += buf;
    return sub && outside && ratio > kAreaRatio;
  };

  std::string detail;
  NtcSpec ones = base;
  ones.nominal = VectorXd::Ones(2);
  const NtcResult r = ntc_max_scaling(net, ones);
  ones.bounds = r.k_star * ones.nominal;
  const bool a = evaluate(ones, "all-ones", detail);
  const bool b = evaluate(ntc_direction_search(net, base, 256), "search256", detail);
  return {a && b, detail};
}

Verdict ntc_safety() {
  const auto t0 = std::chrono::steady_clock::now();
  const NetworkModel net = load("sixbus.json");
  NtcSpec spec = parse_ntc(read_file(kData + "/sixbus_ntc.json"), net);
  const NtcResult r = ntc_max_scaling(net, spec);
  spec.bounds = r.k_star * spec.nominal;
  const Polyhedron pntc = ntc_polyhedron(net, spec);
  const MatrixXd isf = isf_matrix(net);
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 0; l < net.n_line(); ++l)
    for (int s : {1, -1})
      worst = std::max(worst, support(pntc, s * isf.row(l).transpose()).value - net.lines[size_t(l)].limit);
  NtcSpec over = spec;
  over.bounds = (r.k_star + 1.0) * spec.nominal;
  const NtcVerification v = verify_ntc(net, over);
  const double t = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "k_star=%.3f worst_excess=%.3g over_violations=%zu time=%.2fs", r.k_star, worst,
                v.violations.size(), t);
  return {worst <= kLineTol && !v.safe && t < kNtcSeconds, buf};
}

Verdict strong_feasibility() {
  const NetworkModel net = load("sixbus_strong.json");
  const AggregationMap agg = parse_aggregation(read_file(kData + "/sixbus_agg.json"), net);
  const PolyUnion pft = strong_feasible_set(net, agg);
  if (pft.empty()) return {false, "PFt empty"};
  const Polyhedron plt = mapped_sets(net, agg).pl;
  const Polyhedron pg = generator_polyhedron(net);
  const MatrixXd T = agg.matrix(), isf = isf_matrix(net);
  const ProbeBox box = bounding_box(plt, 0.0);

  std::vector<VectorXd> members;
  int safe = 0, unsafe_members = 0, violating = 0, quiet_outside = 0, outside = 0;
  for (int i = 0; i < 200000 && (members.size() < 100 || outside < 100); ++i) {
    const VectorXd y = box.at(i);
    if (members.size() < 100 && union_contains(pft, y, -kBand)) {
      members.push_back(y);
      const double e = fiber_worst_excess(net, pg, T, isf, y);
      (e <= kLineTol ? safe : unsafe_members) += 1;
    } else if (outside < 100 && contains(plt, y, -kBand) && !union_contains(pft, y, kBand)) {
      ++outside;
      const double e = fiber_worst_excess(net, pg, T, isf, y);
      (e > 0 ? violating : quiet_outside) += 1;
    }
  }

  bool nonconvex = false;
  double witness_excess = 0;
  for (size_t i = 0; i < members.size() && !nonconvex; ++i)
    for (size_t j = i + 1; j < members.size() && !nonconvex; ++j) {
      const VectorXd mid = 0.5 * (members[i] + members[j]);
      if (!union_contains(pft, mid, kBand)) {
        witness_excess = fiber_worst_excess(net, pg, T, isf, mid);
        nonconvex = witness_excess > 0;
      }
    }

  char buf[220];
  std::snprintf(buf, sizeof buf,
                "parts=%zu members=%zu safe=%d outside=%d violating=%d nonconvex=%d midpoint_excess=%.3g MW",
                pft.parts.size(), members.size(), safe, outside, violating, nonconvex, witness_excess);
  return {members.size() == 100 && safe == 100 && outside == 100 && violating == 100 && nonconvex, buf};
}

Verdict square_minus_square() {
  const Polyhedron Y = Polyhedron::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(4, 4));
  const Polyhedron R = Polyhedron::box(Eigen::Vector2d(1, 1), Eigen::Vector2d(3, 3));
  const PolyUnion U = region_diff(Y, {R});
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0, 4);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const VectorXd y = Eigen::Vector2d(u(rng), u(rng));
    if (contains(R, y, kBand) != contains(R, y, -kBand)) continue;
    mismatches += union_contains(U, y) == contains(R, y);
  }
  long in_u = 0, in_r = 0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    const VectorXd y = Eigen::Vector2d(4 * halton(i + 1, 2), 4 * halton(i + 1, 3));
    in_u += union_contains(U, y, 0.0);
    in_r += contains(R, y, 0.0);
  }
  const double area_u = 16.0 * double(in_u) / samples, area_r = 16.0 * double(in_r) / samples;
  const double rel_u = std::abs(area_u - 12.0) / 12.0;
  const double rel_total = std::abs(area_u + area_r - 16.0) / 16.0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "parts=%zu mismatches=%d area(U)=%.4f (rel %.2g) area(U)+area(R)=%.4f (rel %.2g)",
                U.parts.size(), mismatches, area_u, rel_u, area_u + area_r, rel_total);
  return {mismatches == 0 && rel_u <= kAreaRel && rel_total <= kAreaRel && check_disjoint_interiors(U), buf};
}

Verdict isf_validity() {
  const NetworkModel net = load("sixbus.json");
  const MatrixXd base = isf_matrix(net, Eigen::Index(0));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1000, 1000);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    VectorXd x(net.n_bus());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
    x.array() -= x.mean();
    const VectorXd f0 = base * x;
    for (Eigen::Index r = 0; r < net.n_bus(); ++r)
      worst = std::max(worst, (isf_matrix(net, r) * x - f0).norm() / std::max(1.0, f0.norm()));
    worst = std::max(worst, (isf_matrix(net) * x - f0).norm() / std::max(1.0, f0.norm()));
  }
  const NetworkModel ring = load("three_ring.json");
  const VectorXd f = dc_flows(ring, Eigen::Vector3d(1, -1, 0));
  // lines 1-2, 1-3, 3-2: direct path carries 2/3, the detour 1/3
  const double ring_err =
      std::max({std::abs(f(0) - 2.0 / 3.0), std::abs(f(1) - 1.0 / 3.0), std::abs(f(2) - 1.0 / 3.0)});
  char buf[160];
  std::snprintf(buf, sizeof buf, "slack_rel=%.3g ring_err=%.3g", worst, ring_err);
  return {worst <= kIsfRel && ring_err <= kRingTol, buf};
}

Verdict lp_spot_checks() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1), pos(0.1, 1);
  std::uniform_int_distribution<int> nd(2, 6), eqd(0, 1);
  int gap_fail = 0, det_fail = 0, cert_fail = 0, non_optimal = 0;
  double worst_gap = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = nd(rng), m = n + nd(rng), k = eqd(rng);
    VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0(j) = u(rng);
    lp::LpProblem p = lp::LpProblem::with_dim(n);
    p.A.resize(m + 2 * n, n);
    p.b.resize(m + 2 * n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) p.A(i, j) = u(rng);
      p.b(i) = p.A.row(i).dot(x0) + pos(rng);
    }
    for (int j = 0; j < n; ++j) {
      p.A.row(m + 2 * j) = VectorXd::Unit(n, j).transpose();
      p.A.row(m + 2 * j + 1) = -VectorXd::Unit(n, j).transpose();
      p.b(m + 2 * j) = p.b(m + 2 * j + 1) = 5;
    }
    p.E.resize(k, n);
    p.f.resize(k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < n; ++j) p.E(i, j) = u(rng);
      p.f(i) = p.E.row(i).dot(x0);
    }
    for (int j = 0; j < n; ++j) p.objective(j) = u(rng);

    const lp::LpResult a = lp::solve(p), b = lp::solve(p);
    if (a.status != b.status || a.value != b.value || (a.point && b.point && *a.point != *b.point)) ++det_fail;
    if (!a.optimal()) {
      ++non_optimal;
      continue;
    }
    if (lp::max_violation(p, *a.point) > kCertTol) ++cert_fail;

    // min b.u + f.v  s.t.  A'u + E'v = c, u >= 0
    const Eigen::Index mu = p.A.rows();
    lp::LpProblem d = lp::LpProblem::with_dim(mu + k);
    d.sense = lp::Sense::Minimize;
    d.objective << p.b, p.f;
    d.A = MatrixXd::Zero(mu, mu + k);
    d.A.leftCols(mu) = -MatrixXd::Identity(mu, mu);
    d.b = VectorXd::Zero(mu);
    d.E.resize(n, mu + k);
    d.E << p.A.transpose(), p.E.transpose();
    d.f = p.objective;
    const lp::LpResult dr = lp::solve(d);
    const double gap = dr.optimal() ? std::abs(dr.value - a.value) : std::numeric_limits<double>::infinity();
    worst_gap = std::max(worst_gap, gap);
    gap_fail += gap > kDualTol;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "lps=100 non_optimal=%d determinism_fail=%d certificate_fail=%d duality_fail=%d "
                "worst_gap=%.3g", non_optimal, det_fail, cert_fail, gap_fail, worst_gap);
  return {non_optimal == 0 && det_fail == 0 && cert_fail == 0 && gap_fail == 0, buf};
}

Verdict large_case() {
  const auto t0 = std::chrono::steady_clock::now();
  const NetworkModel net = parse_matpower(read_file(kData + "/case9241pegase.m"));
  require_connected(net);
  const bool counts = net.n_bus() == 9241 && net.n_line() == 16049;
  const AggregationMap agg4 = parse_aggregation(read_file(kData + "/pegase_agg4.json"), net);
  const NetworkImageOracle oracle(net, agg4);
  ApproxOptions opt;
  opt.budget = 50;
  const ApproxSet a = image_approx(oracle, opt);
  int outside = 0;
  for (const auto& v : a.inner_vertices) outside += !contains(a.outer, v, kInnerOuterTol);
  const double t_approx = seconds_since(t0);

  const AggregationMap pl = parse_aggregation(read_file(kData + "/pegase_agg_pl.json"), net);
  const NetworkImageOracle pl_oracle(net, pl);
  VectorXd x(net.n_bus());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = net.buses[size_t(i)].gen_dispatch - net.buses[size_t(i)].demand;
  x.array() -= x.mean();
  const VectorXd y0 = apply_map(pl, x);
  const bool base_ok = pl_oracle.fiber_feasible(y0);
  int corners_ok = 0;
  for (double s0 : {-1.0, 1.0})
    for (double s1 : {-1.0, 1.0}) {
      VectorXd y = y0;
      y(0) += s0 * kPolishBoxMw;
      y(1) += s1 * kPolishBoxMw;
      y(2) -= (s0 + s1) * kPolishBoxMw;
      corners_ok += pl_oracle.fiber_feasible(y);
    }
  const double t = seconds_since(t0);
  char buf[260];
  std::snprintf(buf, sizeof buf,
                "buses=%ld lines=%ld queries=%zu inner=%zu outside_outer=%d gap=%.1f MW approx_time=%.1fs "
                "base_feasible=%d box_corners=%d/4 time=%.1fs",
                long(net.n_bus()), long(net.n_line()), a.directions.size(), a.inner_vertices.size(), outside, a.gap,
                t_approx, base_ok, corners_ok, t);
  return {counts && outside == 0 && !a.inner_vertices.empty() && corners_ok == 4 && t < kLargeSeconds, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"six-bus exact image vs fiber oracle", six_bus_oracle},
      {"NTC set strictly inside flow-based set", ntc_underestimation},
      {"NTC safety and maximality", ntc_safety},
      {"strongly feasible set", strong_feasibility},
      {"square minus square", square_minus_square},
      {"ISF slack invariance and ring split", isf_validity},
      {"LP determinism and duality", lp_spot_checks},
      {"large-case pipeline", large_case},
  };
  int failed = 0, idx = 0;
  for (const auto& [name, run] : criteria) {
    ++idx;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", idx, name, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
