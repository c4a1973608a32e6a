#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gridhull/capacity.hpp"
#include "gridhull/casefmt.hpp"
#include "gridhull/error.hpp"
#include "gridhull/setdiff.hpp"

using namespace gridhull;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::string data(const std::string& name) { return read_file(std::string(GRIDHULL_DATA_DIR) + "/" + name); }

NetworkModel load(const std::string& name) { return parse_network_json(data(name)); }

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

NetworkModel two_bus(double limit) {
  NetworkModel net;
  net.buses = {{1, 0.0, 10.0}, {2, 8.0, 10.0}};
  net.lines = {{1, 1, 2, 10.0, limit}};
  return net;
}

NtcSpec single_corridor(double bound = kInfinity) {
  NtcSpec s;
  s.corridors = {{"forward", {{1, 1.0}}}};
  s.nominal = vec({1});
  if (std::isfinite(bound)) s.bounds = vec({bound});
  return s;
}

NetworkModel self_supplying_ring() {
  NetworkModel net;
  net.buses = {{1, 10, 30}, {2, 20, 30}, {3, 5, 30}};
  net.lines = {{1, 1, 2, 5.0, 100}, {2, 1, 3, 5.0, 100}, {3, 3, 2, 5.0, 100}};
  return net;
}

// Six-bus region probe on the balance plane: (north, south) -> y.
VectorXd six_y(double n, double s) { return vec({n, -n - s, s}); }

// Largest signed flow of line l over PNTC with bounds k * n.
double max_flow_at(const NetworkModel& net, NtcSpec spec, double k, Eigen::Index l, int sign) {
  spec.bounds = k * spec.nominal;
  const MatrixXd H = isf_matrix(net);
  const SupportResult r = support(ntc_polyhedron(net, spec), sign * H.row(l).transpose());
  return r.status == lp::Status::Optimal ? r.value : -kInfinity;
}

// Largest signed flow of line l over the fiber {x in PG : T x = y}.
double fiber_max_flow(const NetworkModel& net, const AggregationMap& agg, const VectorXd& y, Eigen::Index l,
                      int sign) {
  Polyhedron F = generator_polyhedron(net);
  const MatrixXd T = agg.matrix();
  for (Eigen::Index j = 0; j < T.rows(); ++j) F = F.with_equality(T.row(j), y(j));
  const SupportResult r = support(F, sign * isf_matrix(net).row(l).transpose());
  return r.value;
}

bool violates_somewhere(const NetworkModel& net, const AggregationMap& agg, const VectorXd& y) {
  for (Eigen::Index l = 0; l < net.n_line(); ++l)
    for (int s : {1, -1})
      if (fiber_max_flow(net, agg, y, l, s) > net.lines[static_cast<size_t>(l)].limit + 1e-6) return true;
  return false;
}

}  // namespace

TEST_CASE("ntc polyhedron without corridors is PG") {
  const NetworkModel net = load("sixbus.json");
  NtcSpec s;
  const Polyhedron P = ntc_polyhedron(net, s);
  const Polyhedron G = generator_polyhedron(net);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-6000, 7000);
  for (int t = 0; t < 200; ++t) {
    VectorXd x(6);
    for (auto& e : x) e = u(rng);
    x(5) = -x.head(5).sum();
    CHECK(contains(P, x) == contains(G, x));
  }
}

TEST_CASE("two-bus ntc polyhedron caps the line flow") {
  const NetworkModel net = two_bus(6.0);
  const Polyhedron P = ntc_polyhedron(net, single_corridor(6.0));
  CHECK(support(P, vec({1, 0})).value == doctest::Approx(6.0));
  CHECK(support(P, vec({-1, 0})).value == doctest::Approx(0.0));
}

TEST_CASE("two-bus line scaling") {
  CHECK(ntc_line_scaling(two_bus(6.0), single_corridor(), 0, 1) == doctest::Approx(6.0));
  CHECK(ntc_line_scaling(two_bus(6.0), single_corridor(), 0, -1) == kInfinity);
  CHECK(ntc_line_scaling(two_bus(9.0), single_corridor(), 0, 1) == kInfinity);
  const NtcResult r = ntc_max_scaling(two_bus(6.0), single_corridor());
  CHECK(r.k_star == doctest::Approx(6.0));
  CHECK(r.binding_line == 0);
  CHECK(r.binding_sign == 1);
  REQUIRE(r.bounds.size() == 1);
  CHECK(r.bounds(0) == doctest::Approx(6.0));
  CHECK(r.table.size() == 2);
}

TEST_CASE("unconstrained NTC reports infinity") {
  const NtcResult r = ntc_max_scaling(two_bus(9.0), single_corridor());
  CHECK(r.k_star == kInfinity);
  CHECK(r.bounds.size() == 0);
  CHECK(r.binding_line == -1);
}

TEST_CASE("ntc spec validation") {
  const NetworkModel net = two_bus(6.0);
  NtcSpec bad = single_corridor();
  bad.corridors[0].terms[0].first = 7;
  CHECK_THROWS_AS(ntc_max_scaling(net, bad), InputError);
  NtcSpec coef = single_corridor();
  coef.corridors[0].terms[0].second = 2.0;
  CHECK_THROWS_AS(ntc_max_scaling(net, coef), InputError);
  NtcSpec zero = single_corridor();
  zero.nominal = vec({0});
  CHECK_THROWS_AS(ntc_max_scaling(net, zero), InputError);
  CHECK_THROWS_AS(ntc_polyhedron(net, single_corridor()), InputError);
}

TEST_CASE("six-bus k table agrees with a 1 MW grid oracle") {
  const NetworkModel net = load("sixbus.json");
  const NtcSpec spec = parse_ntc(data("sixbus_ntc.json"), net);
  const NtcResult r = ntc_max_scaling(net, spec);
  CHECK(r.table.size() == static_cast<size_t>(2 * net.n_line()));
  for (const auto& row : r.table) {
    const double lim = net.lines[static_cast<size_t>(row.line)].limit;
    if (!std::isfinite(row.k)) {
      CHECK(max_flow_at(net, spec, 1e6, row.line, row.sign) < lim + 1e-6);
      continue;
    }
    CHECK(max_flow_at(net, spec, row.k + 1.0, row.line, row.sign) >= lim - 1e-6);
    CHECK(max_flow_at(net, spec, row.k - 1.0, row.line, row.sign) < lim);
  }
  double kmin = kInfinity;
  for (const auto& row : r.table) kmin = std::min(kmin, row.k);
  CHECK(r.k_star == kmin);
}

TEST_CASE("ntc safety and maximality on two-bus") {
  const NetworkModel net = load("two_bus.json");
  NtcSpec spec = parse_ntc(data("two_bus_ntc.json"), net);
  const NtcResult r = ntc_max_scaling(net, spec);
  REQUIRE(r.k_star == doctest::Approx(6.0));
  spec.bounds = r.bounds;
  const Polyhedron P = ntc_polyhedron(net, spec);
  const MatrixXd H = isf_matrix(net);
  for (Eigen::Index l = 0; l < net.n_line(); ++l)
    for (int s : {1, -1})
      CHECK(support(P, s * H.row(l).transpose()).value <= net.lines[static_cast<size_t>(l)].limit + 1e-6);
  CHECK(verify_ntc(net, spec).safe);

  spec.bounds = (r.k_star + 1.0) * spec.nominal;
  const NtcVerification v = verify_ntc(net, spec);
  CHECK_FALSE(v.safe);
  bool binding_reported = false;
  for (const auto& [l, s] : v.violations) binding_reported |= (l == r.binding_line && s == r.binding_sign);
  CHECK(binding_reported);
}

TEST_CASE("six-bus k_star is the smallest nonempty scaling and is not safe") {
  const NetworkModel net = load("sixbus.json");
  NtcSpec spec = parse_ntc(data("sixbus_ntc.json"), net);
  const NtcResult r = ntc_max_scaling(net, spec);
  CHECK(r.k_star == doctest::Approx(3000.0));
  spec.bounds = (r.k_star - 1.0) * spec.nominal;
  CHECK(is_empty(ntc_polyhedron(net, spec)));
  spec.bounds = r.bounds;
  const NtcVerification v = verify_ntc(net, spec);
  CHECK_FALSE(v.safe);
  bool binding_reported = false;
  for (const auto& [l, s] : v.violations) binding_reported |= (l == r.binding_line && s == r.binding_sign);
  CHECK(binding_reported);
}

TEST_CASE("verify_ntc with zero bounds on a self-supplying net") {
  const NetworkModel net = self_supplying_ring();
  NtcSpec spec = single_corridor(0.0);
  CHECK(verify_ntc(net, spec).safe);
}

TEST_CASE("decreasing a limit never increases k_star") {
  const NetworkModel net = load("sixbus.json");
  const NtcSpec spec = parse_ntc(data("sixbus_ntc.json"), net);
  const double base = ntc_max_scaling(net, spec).k_star;
  for (Eigen::Index l = 0; l < net.n_line(); ++l) {
    NetworkModel tighter = net;
    tighter.lines[static_cast<size_t>(l)].limit *= 0.8;
    CHECK(ntc_max_scaling(tighter, spec).k_star <= base + 1e-6);
  }
}

TEST_CASE("direction search") {
  SUBCASE("single corridor reduces to max scaling") {
    const NtcSpec best = ntc_direction_search(two_bus(6.0), single_corridor(), 16);
    REQUIRE(best.bounds.size() == 1);
    CHECK(best.bounds(0) == doctest::Approx(6.0));
  }
  SUBCASE("zero weights keep the first sample") {
    const NetworkModel net = load("sixbus.json");
    NtcSpec spec = parse_ntc(data("sixbus_ntc.json"), net);
    spec.weights = vec({0, 0});
    const NtcSpec one = ntc_direction_search(net, spec, 1, 42);
    const NtcSpec many = ntc_direction_search(net, spec, 32, 42);
    CHECK(one.nominal == many.nominal);
  }
  SUBCASE("search beats the all-ones direction and is deterministic") {
    const NetworkModel net = load("sixbus.json");
    const NtcSpec spec = parse_ntc(data("sixbus_ntc.json"), net);
    const NtcResult ones = ntc_max_scaling(net, spec);
    const NtcSpec best = ntc_direction_search(net, spec, 256, 42);
    CHECK(spec.weights.dot(best.bounds) >= spec.weights.dot(ones.bounds) - 1e-6);
    const NtcSpec again = ntc_direction_search(net, spec, 256, 42);
    CHECK(again.bounds == best.bounds);
    CHECK(std::abs(best.nominal.norm() - 1.0) < 1e-12);
    CHECK((best.nominal.array() >= 0).all());
  }
}

TEST_CASE("generator image is closed form of the exact image") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = parse_aggregation(data("sixbus_agg.json"), net);
  const Polyhedron closed = generator_image(net, agg);
  const Polyhedron exact = image_exact(generator_polyhedron(net), agg);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> un(-4000, 8000), us(-7000, -2000);
  for (int t = 0; t < 1000; ++t) {
    const VectorXd y = six_y(un(rng), us(rng));
    CHECK(contains(closed, y) == contains(exact, y));
  }
  CHECK(support(closed, vec({1, 0, 0})).value == doctest::Approx(7000.0));
  CHECK(contains(closed, vec({0, 0, 0})) == false);
  CHECK(contains(closed, vec({3000, 0, -3000})));
}

TEST_CASE("mapped sets with trivial aggregations") {
  const NetworkModel net = self_supplying_ring();
  const MappedSets id = mapped_sets(net, AggregationMap::from_assignment({0, 1, 2}, 3));
  const Polyhedron PGL = intersect(generator_polyhedron(net), line_polyhedron(net));
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-25, 25);
  for (int t = 0; t < 300; ++t) {
    const VectorXd x = vec({u(rng), u(rng), 0});
    VectorXd xb = x;
    xb(2) = -x(0) - x(1);
    CHECK(contains(id.pl, xb) == contains(PGL, xb));
    CHECK(contains(id.pg, xb) == contains(generator_polyhedron(net), xb));
  }
  const MappedSets one = mapped_sets(net, AggregationMap::from_assignment({0, 0, 0}, 1));
  CHECK(support(one.pl, vec({1})).value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(support(one.pl, vec({-1})).value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("six-bus nesting PNTCt, PLt, PGt") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = parse_aggregation(data("sixbus_agg.json"), net);
  NtcSpec spec = parse_ntc(data("sixbus_ntc.json"), net);
  spec = ntc_direction_search(net, spec, 64, 42);
  const MappedSets m = mapped_sets(net, agg, &spec);
  REQUIRE(m.pntc);
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> un(-3000, 7000), us(-6000, -3000);
  int bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const VectorXd y = six_y(un(rng), us(rng));
    if (contains(*m.pntc, y, -1e-6) && !contains(m.pl, y)) ++bad;
    if (contains(m.pl, y, -1e-6) && !contains(m.pg, y)) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("strong feasibility with non-binding limits is PGt") {
  NetworkModel net = load("sixbus.json");
  for (auto& l : net.lines) l.limit = 1e5;
  const AggregationMap agg = parse_aggregation(data("sixbus_agg.json"), net);
  CHECK(violation_images(net, agg).empty());
  const PolyUnion U = strong_feasible_set(net, agg);
  REQUIRE(U.parts.size() == 1);
  const Polyhedron pgt = generator_image(net, agg);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> un(-3000, 7000), us(-6000, -3000);
  for (int t = 0; t < 300; ++t) {
    const VectorXd y = six_y(un(rng), us(rng));
    CHECK(union_contains(U, y) == contains(pgt, y));
  }
}

TEST_CASE("strong feasibility on the increased-limit fixture") {
  const NetworkModel net = load("sixbus_strong.json");
  const AggregationMap agg = parse_aggregation(data("sixbus_agg.json"), net);
  const PolyUnion U = strong_feasible_set(net, agg);
  REQUIRE_FALSE(U.empty());
  CHECK(check_disjoint_interiors(U));
  const Polyhedron plt = mapped_sets(net, agg).pl;
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> un(-3000, 7000), us(-6000, -3000);
  int in_pf = 0, in_gap = 0;
  for (int t = 0; t < 20000 && (in_pf < 30 || in_gap < 30); ++t) {
    const VectorXd y = six_y(un(rng), us(rng));
    if (union_contains(U, y, -1e-3)) {
      if (in_pf >= 30) continue;
      ++in_pf;
      CHECK_FALSE(violates_somewhere(net, agg, y));
      const FeasibilityReport r = check_feasible(net, agg, y);
      CHECK(r.feasible);
      CHECK(r.strongly_feasible);
    } else if (contains(plt, y, -1e-3) && !union_contains(U, y, 1e-3)) {
      if (in_gap >= 30) continue;
      ++in_gap;
      CHECK(violates_somewhere(net, agg, y));
      const FeasibilityReport r = check_feasible(net, agg, y);
      CHECK(r.feasible);
      CHECK_FALSE(r.strongly_feasible);
      REQUIRE(r.worst_line);
      CHECK(std::abs(r.worst_line->flow) > r.worst_line->limit);
    }
  }
  CHECK(in_pf == 30);
  CHECK(in_gap == 30);
}

TEST_CASE("check_feasible trivial cases") {
  const NetworkModel net = self_supplying_ring();
  const AggregationMap agg = AggregationMap::from_assignment({0, 1, 1}, 2);
  const FeasibilityReport zero = check_feasible(net, agg, vec({0, 0}));
  CHECK(zero.feasible);
  CHECK(zero.strongly_feasible);
  REQUIRE(zero.witness);
  CHECK(std::abs(zero.witness->sum()) < 1e-9);
  CHECK(apply_map(agg, *zero.witness).norm() < 1e-6);
  const FeasibilityReport far = check_feasible(net, agg, vec({1000, -1000}));
  CHECK_FALSE(far.feasible);
  CHECK_FALSE(far.strongly_feasible);
  CHECK_THROWS_AS(check_feasible(net, agg, vec({1, 0})), InputError);
}

TEST_CASE("sparse image oracle agrees with the dense image") {
  const NetworkModel net = load("sixbus.json");
  const AggregationMap agg = parse_aggregation(data("sixbus_agg.json"), net);
  const Polyhedron PGL = intersect(generator_polyhedron(net), line_polyhedron(net));
  const PolyhedronImageOracle dense(PGL, agg.matrix());
  const NetworkImageOracle sparse(net, agg);
  CHECK(sparse.dim() == 3);
  std::mt19937 rng(6);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    const VectorXd d = vec({g(rng), g(rng), g(rng)});
    const SupportResult a = dense.support(d), b = sparse.support(d);
    REQUIRE(b.status == lp::Status::Optimal);
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-7).scale(1000));
    CHECK(std::abs(b.maximizer.sum()) < 1e-6);
  }
  const Polyhedron plt = image_exact(PGL, agg);
  std::uniform_real_distribution<double> un(-3000, 7000), us(-6000, -3000);
  for (int t = 0; t < 200; ++t) {
    const VectorXd y = six_y(un(rng), us(rng));
    if (contains(plt, y, 1e-3) != contains(plt, y, -1e-3)) continue;
    CHECK(sparse.fiber_feasible(y) == contains(plt, y));
  }
}

TEST_CASE("capacity accounting") {
  const AccountResult a = capacity_account({100, 10, 20, 30});
  CHECK(a.ntc == 70);
  CHECK(a.atc == 40);
  CHECK_FALSE(a.clamped);
  const AccountResult b = capacity_account({100, 0, 0, 0});
  CHECK(b.ntc == 100);
  CHECK(b.atc == 100);
  const AccountResult c = capacity_account({100, 60, 50, 0});
  CHECK(c.ntc == 0);
  CHECK(c.clamped);
  CHECK_THROWS_AS(capacity_account({-1, 0, 0, 0}), InputError);
}
