#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "gridhull/casefmt.hpp"
#include "gridhull/error.hpp"
#include "gridhull/netmodel.hpp"

using namespace gridhull;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

NetworkModel load(const std::string& name) {
  return parse_network_json(read_file(std::string(GRIDHULL_DATA_DIR) + "/" + name));
}

NetworkModel two_bus(double limit = 6.0) {
  NetworkModel net;
  net.buses = {{1, 0.0, 10.0}, {2, 8.0, 10.0}};
  net.lines = {{1, 1, 2, 10.0, limit}};
  return net;
}

NetworkModel three_ring() {
  NetworkModel net;
  net.buses = {{1, 0, 1}, {2, 0, 1}, {3, 0, 1}};
  net.lines = {{1, 1, 2, 5.0, 100}, {2, 1, 3, 5.0, 100}, {3, 3, 2, 5.0, 100}};
  return net;
}

// Flows from a dense angle solve with bus 0 as reference.
VectorXd dense_flows(const NetworkModel& net, const VectorXd& x) {
  const Eigen::Index n = net.n_bus();
  MatrixXd B = MatrixXd::Zero(n, n);
  for (const Line& l : net.lines) {
    const auto a = net.bus_index(l.from_bus), b = net.bus_index(l.to_bus);
    B(a, a) += l.susceptance;
    B(b, b) += l.susceptance;
    B(a, b) -= l.susceptance;
    B(b, a) -= l.susceptance;
  }
  VectorXd theta = VectorXd::Zero(n);
  theta.tail(n - 1) = B.bottomRightCorner(n - 1, n - 1).colPivHouseholderQr().solve(x.tail(n - 1));
  VectorXd f(net.n_line());
  for (Eigen::Index k = 0; k < net.n_line(); ++k) {
    const Line& l = net.lines[static_cast<size_t>(k)];
    f(k) = l.susceptance * (theta(net.bus_index(l.from_bus)) - theta(net.bus_index(l.to_bus)));
  }
  return f;
}

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

}  // namespace

TEST_CASE("two-bus flow equals the injection") {
  const NetworkModel net = two_bus();
  const VectorXd f = dc_flows(net, vec({4.0, -4.0}));
  CHECK(f(0) == doctest::Approx(4.0));
  CHECK(isf_matrix(net)(0, 0) - isf_matrix(net)(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("three-bus ring splits 2/3 and 1/3") {
  const NetworkModel net = three_ring();
  const double P = 90.0;
  const VectorXd f = dc_flows(net, vec({P, -P, 0.0}));
  CHECK(std::abs(f(0) - 2 * P / 3) <= 1e-12 * P);
  CHECK(std::abs(f(1) - P / 3) <= 1e-12 * P);
  CHECK(std::abs(f(2) - P / 3) <= 1e-12 * P);
}

TEST_CASE("zero injection gives zero flows") {
  const NetworkModel net = load("sixbus.json");
  CHECK(dc_flows(net, VectorXd::Zero(6)).norm() == 0.0);
}

TEST_CASE("six-bus flows match a dense angle solve") {
  const NetworkModel net = load("sixbus.json");
  const VectorXd unit = vec({1, 0, 0, 0, 0, -1});
  CHECK((dc_flows(net, unit) - dense_flows(net, unit)).norm() < 1e-12);
  // Regions self-supply except the south, which imports 3 GW from bus 1.
  const VectorXd x = vec({3000, 0, 0, 0, 0, -3000});
  CHECK((dc_flows(net, x) - dense_flows(net, x)).norm() < 1e-9 * 3000);
}

TEST_CASE("isf rows sum to zero and are independent of the reference bus") {
  const NetworkModel net = load("sixbus.json");
  const MatrixXd H = isf_matrix(net);
  for (Eigen::Index r = 0; r < H.rows(); ++r) CHECK(std::abs(H.row(r).sum()) <= 1e-9 * H.row(r).norm());
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1000, 1000);
  for (Eigen::Index ref = 0; ref < net.n_bus(); ++ref) {
    const MatrixXd Hr = isf_matrix(net, ref);
    for (int t = 0; t < 100; ++t) {
      VectorXd x(6);
      for (auto& e : x) e = u(rng);
      x.array() -= x.mean();
      const VectorXd a = H * x, b = Hr * x;
      CHECK((a - b).norm() <= 1e-9 * std::max(1.0, a.norm()));
    }
  }
}

TEST_CASE("flow antisymmetry") {
  const NetworkModel net = load("sixbus.json");
  const VectorXd x = vec({2000, -500, 0, 1500, -1000, -2000});
  CHECK((dc_flows(net, -x) + dc_flows(net, x)).norm() == 0.0);
}

TEST_CASE("dc_flows rejects unbalanced injections") {
  const NetworkModel net = two_bus();
  CHECK_THROWS_AS(dc_flows(net, vec({1.0, 0.0})), InputError);
  CHECK_NOTHROW(dc_flows(net, vec({1.0, -1.0 + 5e-7})));
  CHECK_THROWS_AS(dc_flows(net, vec({1.0})), InputError);
}

TEST_CASE("disconnected network is a structural error naming islands") {
  NetworkModel net;
  net.buses = {{1, 0, 1}, {2, 0, 1}, {3, 0, 1}, {4, 0, 1}};
  net.lines = {{1, 1, 2, 1.0, 10}, {2, 3, 4, 1.0, 10}};
  CHECK(components(net).size() == 2);
  try {
    isf_matrix(net);
    FAIL("expected StructuralError");
  } catch (const StructuralError& e) {
    const std::string msg = e.what();
    CHECK(msg.find('3') != std::string::npos);
  }
  CHECK_THROWS_AS(require_connected(net), StructuralError);
}

TEST_CASE("validate rejects malformed models") {
  NetworkModel dup = two_bus();
  dup.buses[1].id = 1;
  CHECK_THROWS_AS(validate(dup), InputError);
  NetworkModel self = two_bus();
  self.lines[0].to_bus = 1;
  CHECK_THROWS_AS(validate(self), InputError);
  NetworkModel lim = two_bus(0.0);
  CHECK_THROWS_AS(validate(lim), InputError);
  NetworkModel gen = two_bus();
  gen.buses[0].gen_max = -1;
  CHECK_THROWS_AS(validate(gen), InputError);
}

TEST_CASE("dense isf respects the size cap") {
  CHECK_THROWS_AS(isf_matrix(load("sixbus.json"), {}, 10), ResourceError);
}

TEST_CASE("generator polyhedron") {
  NetworkModel one;
  one.buses = {{1, 5.0, 10.0}};
  const Polyhedron g1 = generator_polyhedron(one);
  CHECK(contains(g1, vec({0.0})));
  CHECK_FALSE(contains(g1, vec({1.0})));

  const NetworkModel net = load("sixbus.json");
  const Polyhedron G = generator_polyhedron(net);
  CHECK(contains(G, vec({3000, 0, 0, 3000, 0, -6000})));
  CHECK_FALSE(contains(G, vec({7001, 0, 0, 0, 0, -7001})));
  CHECK(support(G, vec({1, 0, 0, 0, 0, 0})).value == doctest::Approx(7000.0));
  CHECK(support(G, vec({0, 0, 0, 0, 0, -1})).value == doctest::Approx(6000.0));
  CHECK(support(G, vec({0, 0, 0, 0, 0, 1})).value == doctest::Approx(-3000.0));
}

TEST_CASE("line polyhedron") {
  const NetworkModel two = two_bus();
  const Polyhedron L2 = line_polyhedron(two);
  CHECK(L2.num_ineq() == 2);
  CHECK(contains(L2, vec({0, 0})));
  CHECK_FALSE(contains(L2, vec({7, -7})));
  CHECK(contains(L2, vec({6, -6})));

  const NetworkModel net = load("sixbus.json");
  const Polyhedron L = line_polyhedron(net);
  CHECK(L.num_ineq() == 2 * net.n_line());
  CHECK(contains(L, VectorXd::Zero(6)));
  // Scale a direction until the largest flow meets its limit.
  const VectorXd d = vec({1, 0, 0, 0, 0, -1});
  const VectorXd f = dc_flows(net, d);
  double s = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < f.size(); ++k)
    if (f(k) != 0) s = std::min(s, net.lines[static_cast<size_t>(k)].limit / std::abs(f(k)));
  CHECK(contains(L, s * d));
  CHECK_FALSE(contains(L, (s + 1e-3) * d));
}

TEST_CASE("is_feasible mirrors membership") {
  const NetworkModel two = two_bus();
  CHECK(is_feasible(two, vec({6, -6})));
  CHECK_FALSE(is_feasible(two, vec({7, -7})));
  const NetworkModel net = load("sixbus.json");
  const VectorXd x = vec({3000, 0, 0, 3000, 0, -6000});
  CHECK(is_feasible(net, x) == (contains(generator_polyhedron(net), x) && contains(line_polyhedron(net), x)));
}

TEST_CASE("sparse angle form reproduces the dense flows") {
  const NetworkModel net = load("sixbus.json");
  const SparseDc dc = sparse_dc(net, 0);
  const VectorXd x = vec({2000, -500, 0, 1500, -1000, -2000});
  const MatrixXd B = MatrixXd(dc.bbus);
  VectorXd theta = VectorXd::Zero(6);
  theta.tail(5) = B.bottomRightCorner(5, 5).lu().solve(x.tail(5));
  CHECK((MatrixXd(dc.bf) * theta - dc_flows(net, x)).norm() < 1e-6);
  CHECK((B * theta - x).norm() < 1e-6);
}
