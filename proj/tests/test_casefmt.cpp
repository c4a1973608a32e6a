#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

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

const char* const kTwoBus = R"(function mpc = tiny
mpc.version = '2';
mpc.baseMVA = 100;
%% bus data
mpc.bus = [
	1	3	0	0	0	0	1	1	0	345	1	1.1	0.9;
	2	1	80	10	0	0	1	1	0	345	1	1.1	0.9;
];
mpc.gen = [
	1	50	0	300	-300	1	100	1	250	10	0	0	0	0	0	0	0	0	0	0	0;
];
mpc.branch = [
	1	2	0	0.05	0	120	0	0	0	0	1	-360	360;
];
mpc.bus_name = {
	'A';
	'B';
};
)";

bool same(const NetworkModel& a, const NetworkModel& b) {
  if (a.base_mva != b.base_mva || a.buses.size() != b.buses.size() || a.lines.size() != b.lines.size()) return false;
  for (size_t i = 0; i < a.buses.size(); ++i) {
    const Bus &p = a.buses[i], &q = b.buses[i];
    if (p.id != q.id || p.demand != q.demand || p.gen_max != q.gen_max || p.gen_dispatch != q.gen_dispatch) return false;
  }
  for (size_t i = 0; i < a.lines.size(); ++i) {
    const Line &p = a.lines[i], &q = b.lines[i];
    if (p.id != q.id || p.from_bus != q.from_bus || p.to_bus != q.to_bus || p.susceptance != q.susceptance ||
        p.limit != q.limit || p.unlimited != q.unlimited)
      return false;
  }
  return true;
}

int parse_error_line(const std::string& text) {
  try {
    parse_matpower(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("minimal MATPOWER case") {
  std::vector<std::string> warnings;
  const NetworkModel net = parse_matpower(kTwoBus, {}, &warnings);
  REQUIRE(net.n_bus() == 2);
  REQUIRE(net.n_line() == 1);
  CHECK(net.base_mva == 100.0);
  CHECK(net.buses[1].demand == 80.0);
  CHECK(net.buses[0].gen_max == 250.0);
  CHECK(net.buses[0].gen_dispatch == 50.0);
  CHECK(net.lines[0].susceptance == doctest::Approx(20.0));
  CHECK(net.lines[0].limit == 120.0);
  CHECK_FALSE(net.lines[0].unlimited);
  CHECK(warnings.size() == 1);
}

TEST_CASE("out-of-service branches and generators are skipped") {
  std::string t = replace(kTwoBus, "0	0	0	0	1	-360", "0	0	0	0	0	-360");
  CHECK(parse_matpower(t).n_line() == 0);
  t = replace(kTwoBus, "100	1	250	10", "100	0	250	10");
  CHECK(parse_matpower(t).buses[0].gen_max == 0.0);
}

TEST_CASE("unrated branches map to the configurable cap") {
  const std::string t = replace(kTwoBus, "0.05	0	120", "0.05	0	0");
  const NetworkModel a = parse_matpower(t);
  CHECK(a.lines[0].limit == 99999.0);
  CHECK(a.lines[0].unlimited);
  CaseOptions opt;
  opt.unlimited_mw = 5000;
  CHECK(parse_matpower(t, opt).lines[0].limit == 5000.0);
}

TEST_CASE("MATPOWER parse errors carry line numbers") {
  CHECK(parse_error_line(replace(kTwoBus, "0.05	0	120", "0	0	120")) == 13);
  CHECK(parse_error_line(replace(kTwoBus, "	2	1	80	10	0	0	1	1	0	345	1	1.1	0.9;", "	2	1	80;")) == 7);
  CHECK(parse_error_line(replace(kTwoBus, "	1	2	0	0.05", "	1	7	0	0.05")) == 13);
  CHECK_THROWS_AS(parse_matpower(replace(kTwoBus, "mpc.gen = [", "mpc.gens = [")), ParseError);
  CHECK_THROWS_AS(parse_matpower(replace(kTwoBus, "mpc.baseMVA = 100;", "")), ParseError);
}

TEST_CASE("comments and blank lines do not change the model") {
  std::string t = kTwoBus;
  t = replace(t, "mpc.branch = [", "\n\n% a comment\nmpc.branch = [ % trailing\n");
  t = replace(t, "mpc.bus = [", "mpc.bus = [\n   % inside a table\n\n");
  CHECK(same(parse_matpower(t), parse_matpower(kTwoBus)));
  CHECK(same(parse_matpower(kTwoBus), parse_matpower(kTwoBus)));
}

TEST_CASE("scientific notation is accepted") {
  const NetworkModel net = parse_matpower(replace(kTwoBus, "0.05	0	120", "5e-2	0	1.2E2"));
  CHECK(net.lines[0].limit == 120.0);
  CHECK(net.lines[0].susceptance == doctest::Approx(20.0));
}

TEST_CASE("network JSON round trip") {
  const NetworkModel six = parse_network_json(data("sixbus.json"));
  CHECK(six.n_bus() == 6);
  CHECK(six.n_line() == 7);
  CHECK(same(parse_network_json(write_network_json(six)), six));
  const NetworkModel tiny = parse_matpower(kTwoBus);
  CHECK(same(parse_network_json(write_network_json(tiny)), tiny));
}

TEST_CASE("network JSON schema diagnostics") {
  try {
    parse_network_json(R"({"base_mva": 100, "buses": [{"id": 1, "demand_mw": "x", "gen_max_mw": 1}], "lines": []})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("$.buses[0].demand_mw") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_network_json("{"), ParseError);
  const NetworkModel no_lines = parse_network_json(
      R"({"base_mva": 100, "buses": [{"id": 1, "demand_mw": 0, "gen_max_mw": 1}, {"id": 2, "demand_mw": 0, "gen_max_mw": 1}], "lines": []})");
  CHECK(no_lines.n_line() == 0);
  CHECK_THROWS_AS(require_connected(no_lines), StructuralError);
}

TEST_CASE("aggregation configs") {
  const NetworkModel net = parse_network_json(data("sixbus.json"));
  const AggregationMap agg = parse_aggregation(data("sixbus_agg.json"), net);
  CHECK(agg.n_regions == 3);
  CHECK(agg.names == std::vector<std::string>{"north", "center", "south"});
  CHECK(agg.members(0).size() == 1);
  CHECK(agg.members(1).size() == 4);
  CHECK(agg.members(2).size() == 1);
  const AggregationMap back = parse_aggregation(write_aggregation(agg, net), net);
  CHECK(back.region_of == agg.region_of);
  CHECK(back.names == agg.names);

  auto message = [&](const std::string& text) {
    try {
      parse_aggregation(text, net);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"regions": {"a": [1], "b": [2], "c": [3], "d": [4], "e": [5], "f": [6]}})").find("fewer") !=
        std::string::npos);
  CHECK(message(R"({"regions": {"a": [1, 2, 3], "b": [4, 5]}})").find("6") != std::string::npos);
  CHECK(message(R"({"regions": {"a": [1, 2, 3], "b": [3, 4, 5, 6]}})").find("3") != std::string::npos);
  CHECK(message(R"({"regions": {"a": [1, 2, 3, 4, 5, 6], "b": []}})").find("b") != std::string::npos);
  CHECK(message(R"({"regions": {"a": [1, 2, 3, 4, 5, 6, 9]}})").find("9") != std::string::npos);
}

TEST_CASE("ntc configs") {
  const NetworkModel net = parse_network_json(data("sixbus.json"));
  const NtcSpec s = parse_ntc(data("sixbus_ntc.json"), net);
  CHECK(s.corridors.size() == 2);
  CHECK(s.bounds.size() == 0);
  CHECK(s.nominal == VectorXd::Ones(2));
  NtcSpec t = s;
  t.bounds = Eigen::Vector2d(3000.5, 1234.25);
  const NtcSpec back = parse_ntc(write_ntc(t), net);
  CHECK(back.bounds == t.bounds);
  CHECK(back.corridors[1].terms == t.corridors[1].terms);
  CHECK_THROWS_AS(parse_ntc(R"({"corridors": [{"name": "x", "lines": [[99, 1]]}]})", net), ParseError);
  CHECK_THROWS_AS(parse_ntc(R"({"corridors": [{"name": "x", "lines": [[1, 3]]}]})", net), ParseError);
}

TEST_CASE("polytope JSON round trips") {
  const Polyhedron sq = Polyhedron::box(VectorXd::Zero(2), VectorXd::Ones(2));
  const Polyhedron back = parse_polytope_json(write_polytope_json(sq));
  CHECK(back.A() == sq.A());
  CHECK(back.b() == sq.b());

  const PolyUnion empty{3, {}, true};
  const PolyUnion eback = parse_polyunion_json(write_polytope_json(empty));
  CHECK(eback.empty());
  CHECK(eback.dim == 3);
  CHECK(write_polytope_json(empty).find("\"empty\": true") != std::string::npos);

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  MatrixXd A(5, 3);
  for (auto& e : A.reshaped()) e = u(rng) / 3.0;
  const Polyhedron odd(A, VectorXd::Constant(5, 0.1 + 1.0 / 3.0));
  const Polyhedron oback = parse_polytope_json(write_polytope_json(odd));
  CHECK(oback.A() == odd.A());
  CHECK(oback.b() == odd.b());
}

TEST_CASE("six-bus strong set round trip preserves classification") {
  const NetworkModel net = parse_network_json(data("sixbus_strong.json"));
  const AggregationMap agg = parse_aggregation(data("sixbus_agg.json"), net);
  const PolyUnion U = strong_feasible_set(net, agg);
  const PolyUnion back = parse_polyunion_json(write_polytope_json(U));
  CHECK(back.parts.size() == U.parts.size());
  CHECK(back.disjoint_interiors == U.disjoint_interiors);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> un(-3000, 7000), us(-6000, -3000);
  for (int t = 0; t < 1000; ++t) {
    const double n = un(rng), s = us(rng);
    const VectorXd y = Eigen::Vector3d(n, -n - s, s);
    CHECK(union_contains(back, y) == union_contains(U, y));
  }
}

TEST_CASE("approximation JSON round trip") {
  ApproxSet a;
  a.dim = 2;
  a.inner_vertices = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  a.inner = hull_hrep(a.inner_vertices, 2);
  a.has_inner_hrep = true;
  a.outer = Polyhedron::box(VectorXd::Zero(2), VectorXd::Ones(2));
  a.gap = 0.5;
  a.directions = {Eigen::Vector2d(1, 0)};
  a.support_values = {1.0};
  const ApproxSet b = parse_approx_json(write_polytope_json(a));
  CHECK(b.inner_vertices.size() == 3);
  CHECK(b.has_inner_hrep);
  CHECK(b.gap == 0.5);
  CHECK(b.outer.b() == a.outer.b());
  CHECK(b.directions.size() == 1);
}

TEST_CASE("pegase case counts") {
  std::vector<std::string> warnings;
  const NetworkModel net = parse_matpower(data("case9241pegase.m"), {}, &warnings);
  CHECK(net.n_bus() == 9241);
  CHECK(net.n_line() == 16049);
  const NetworkModel back = parse_network_json(write_network_json(net));
  CHECK(same(back, net));
}
