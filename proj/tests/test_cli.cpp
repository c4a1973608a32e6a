#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "gridhull/cli.hpp"
#include "gridhull/casefmt.hpp"

using namespace gridhull;
namespace fs = std::filesystem;

namespace {

const std::string kData = GRIDHULL_DATA_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gridhull");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "gridhull_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string six(const std::string& f) { return kData + "/" + f; }

}  // namespace

TEST_CASE("project writes exact images for six-bus") {
  const std::string out = scratch("project");
  const Run r = cli({"project", "--net", six("sixbus.json"), "--agg", six("sixbus_agg.json"), "--out", out});
  CHECK(r.code == 0);
  CHECK(fs::exists(out + "/PGt.json"));
  CHECK(fs::exists(out + "/PLt.json"));
  const Polyhedron plt = parse_polytope_json(read_file(out + "/PLt.json"));
  CHECK(plt.dim() == 3);
  CHECK(r.out.find("vertex") != std::string::npos);
}

TEST_CASE("project with approximation writes an approximation file") {
  const std::string out = scratch("approx");
  const Run r = cli({"project", "--net", six("sixbus.json"), "--agg", six("sixbus_agg.json"), "--method", "approx",
                     "--budget", "20", "--out", out});
  CHECK(r.code == 0);
  const ApproxSet a = parse_approx_json(read_file(out + "/PLt.json"));
  CHECK(a.directions.size() <= 20);
  for (const auto& v : a.inner_vertices) CHECK(contains(a.outer, v));
}

TEST_CASE("project is byte-identical for a fixed seed") {
  const std::string a = scratch("seed_a"), b = scratch("seed_b");
  for (const auto& out : {a, b})
    CHECK(cli({"project", "--net", six("sixbus.json"), "--agg", six("sixbus_agg.json"), "--method", "approx", "--seed",
               "7", "--out", out})
              .code == 0);
  CHECK(read_file(a + "/PLt.json") == read_file(b + "/PLt.json"));
}

TEST_CASE("identity aggregation is rejected with a parse exit code") {
  const std::string out = scratch("identity");
  const std::string agg = out + "/identity.json";
  write_file(agg, R"({"regions": {"a": [1], "b": [2], "c": [3], "d": [4], "e": [5], "f": [6]}})");
  const Run r = cli({"project", "--net", six("sixbus.json"), "--agg", agg, "--out", out});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("missing files and bad flags exit 2") {
  CHECK(cli({"project", "--net", "/nonexistent.json", "--agg", six("sixbus_agg.json")}).code == 2);
  CHECK(cli({"project", "--bogus"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("row cap overflow exits 4") {
  const std::string out = scratch("cap");
  ::setenv("GRIDHULL_ROW_CAP", "5", 1);
  const Run r = cli({"project", "--net", six("sixbus.json"), "--agg", six("sixbus_agg.json"), "--out", out});
  ::unsetenv("GRIDHULL_ROW_CAP");
  CHECK(r.code == 4);
}

TEST_CASE("infeasible network constraints exit 3") {
  const std::string out = scratch("infeasible");
  NetworkModel net = parse_network_json(read_file(six("sixbus.json")));
  for (auto& l : net.lines) l.limit = 100;
  write_file(out + "/tight.json", write_network_json(net));
  const Run r = cli({"project", "--net", out + "/tight.json", "--agg", six("sixbus_agg.json"), "--out", out});
  CHECK(r.code == 3);
}

TEST_CASE("ntc on the two-bus fixture") {
  const std::string out = scratch("ntc2");
  const Run r = cli({"ntc", "--net", six("two_bus.json"), "--ntc", six("two_bus_ntc.json"), "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.find("k_star: 0.006 GW") != std::string::npos);
  const auto j = nlohmann::json::parse(read_file(out + "/ntc_result.json"));
  CHECK(j["k_star"].get<double>() == doctest::Approx(6.0));
  CHECK(j["binding_line"]["line_id"] == 1);
  CHECK(j["table"].size() == 2);
  CHECK(j["table"][1]["k"].is_null());
}

TEST_CASE("ntc table, search and verification on six-bus") {
  const std::string out = scratch("ntc6");
  const Run r = cli({"ntc", "--net", six("sixbus.json"), "--ntc", six("sixbus_ntc.json"), "--out", out});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(read_file(out + "/ntc_result.json"));
  CHECK(j["table"].size() == 14);
  const double k = j["k_star"].get<double>();

  const Run s = cli({"ntc", "--net", six("sixbus.json"), "--ntc", six("sixbus_ntc.json"), "--search", "32", "--weights",
                     "1,1", "--out", out});
  CHECK(s.code == 0);

  NtcSpec spec = parse_ntc(read_file(six("sixbus_ntc.json")), parse_network_json(read_file(six("sixbus.json"))));
  spec.bounds = Eigen::Vector2d(k, k);
  write_file(out + "/at_k.json", write_ntc(spec));
  const Run bad = cli({"ntc", "--net", six("sixbus.json"), "--ntc", out + "/at_k.json", "--verify", "--out", out});
  CHECK(bad.code == 0);
  CHECK(bad.out.find("safe: false") != std::string::npos);
  CHECK(bad.out.find("violated line") != std::string::npos);
  CHECK(fs::exists(out + "/ntc_verify.json"));
}

TEST_CASE("ntc verification on two-bus") {
  const std::string out = scratch("verify2");
  const NetworkModel net = parse_network_json(read_file(six("two_bus.json")));
  NtcSpec spec = parse_ntc(read_file(six("two_bus_ntc.json")), net);
  spec.bounds = Eigen::VectorXd::Constant(1, 6.0);
  write_file(out + "/ok.json", write_ntc(spec));
  const Run ok = cli({"ntc", "--net", six("two_bus.json"), "--ntc", out + "/ok.json", "--verify", "--out", out});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("safe: true") != std::string::npos);
  spec.bounds = Eigen::VectorXd::Constant(1, 7.0);
  write_file(out + "/bad.json", write_ntc(spec));
  const Run bad = cli({"ntc", "--net", six("two_bus.json"), "--ntc", out + "/bad.json", "--verify", "--out", out});
  CHECK(bad.out.find("safe: false") != std::string::npos);
}

TEST_CASE("strong writes a union, flagging empty results") {
  const std::string out = scratch("strong");
  const Run r = cli({"strong", "--net", six("sixbus_strong.json"), "--agg", six("sixbus_agg.json"), "--out", out});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(read_file(out + "/pft.json"));
  CHECK(j["empty"] == false);
  CHECK(j["parts"].size() > 1);

  const std::string out2 = scratch("strong_base");
  CHECK(cli({"strong", "--net", six("sixbus.json"), "--agg", six("sixbus_agg.json"), "--out", out2}).code == 0);
  const auto k = nlohmann::json::parse(read_file(out2 + "/pft.json"));
  CHECK(k["empty"] == k["parts"].empty());
}

TEST_CASE("check exit codes") {
  const std::string net = six("sixbus_strong.json"), agg = six("sixbus_agg.json");
  CHECK(cli({"check", "--net", net, "--agg", agg, "--y", "9,-9,0"}).code == 11);
  CHECK(cli({"check", "--net", net, "--agg", agg, "--y", "-2,6,-4"}).code == 0);
  const Run r = cli({"check", "--net", net, "--agg", agg, "--y", "0,4,-4"});
  CHECK(r.code == 10);
  CHECK(r.out.find("worst_line") != std::string::npos);
  CHECK(cli({"check", "--net", net, "--agg", agg, "--y", "1,1"}).code == 2);
}

TEST_CASE("account prints GW with three decimals") {
  const Run r = cli({"account", "--ttc", "0.1", "--trm", "0.01", "--ltc", "0.02", "--aac", "0.03"});
  CHECK(r.code == 0);
  CHECK(r.out == "ntc: 0.070 GW\natc: 0.040 GW\n");
  const Run c = cli({"account", "--ttc", "0.1", "--trm", "0.06", "--ltc", "0.05", "--aac", "0"});
  CHECK(c.out.find("clamped: true") != std::string::npos);
}

TEST_CASE("plot renders layered polygons deterministically") {
  const std::string out = scratch("plot");
  CHECK(cli({"project", "--net", six("sixbus.json"), "--agg", six("sixbus_agg.json"), "--out", out}).code == 0);
  const std::vector<std::string> args = {"plot", out + "/PGt.json", out + "/PLt.json", "--axes", "north,south",
                                         "--net", six("sixbus.json"), "--agg", six("sixbus_agg.json"),
                                         "--out", out + "/a.svg"};
  CHECK(cli(args).code == 0);
  auto args2 = args;
  args2.back() = out + "/b.svg";
  CHECK(cli(args2).code == 0);
  const std::string svg = read_file(out + "/a.svg");
  CHECK(svg == read_file(out + "/b.svg"));
  CHECK(svg.find("width=\"800\" height=\"600\"") != std::string::npos);
  size_t paths = 0;
  for (size_t p = svg.find("<path"); p != std::string::npos; p = svg.find("<path", p + 1)) ++paths;
  CHECK(paths == 2);
  CHECK(svg.find("PLt") != std::string::npos);
}

TEST_CASE("plot of a unit square is a four-vertex path") {
  const std::string out = scratch("square");
  write_file(out + "/sq.json", write_polytope_json(Polyhedron::box(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2))));
  CHECK(cli({"plot", out + "/sq.json", "--out", out}).code == 0);
  const std::string svg = read_file(out + "/plot.svg");
  const auto p = svg.find("<path d=\"");
  REQUIRE(p != std::string::npos);
  const std::string d = svg.substr(p, svg.find('"', p + 9) - p);
  CHECK(std::count(d.begin(), d.end(), 'L') == 3);
}

TEST_CASE("plot of a union draws one polygon per part") {
  const std::string out = scratch("union");
  const Polyhedron a = Polyhedron::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  const Polyhedron b = Polyhedron::box(Eigen::Vector2d(2, 0), Eigen::Vector2d(3, 1));
  write_file(out + "/u.json", write_polytope_json(PolyUnion{2, {a, b}, true}));
  CHECK(cli({"plot", out + "/u.json", "--out", out}).code == 0);
  const std::string svg = read_file(out + "/plot.svg");
  size_t paths = 0;
  for (size_t p = svg.find("<path"); p != std::string::npos; p = svg.find("<path", p + 1)) ++paths;
  CHECK(paths == 2);
}

TEST_CASE("plot of a higher-dimensional set asks for axes") {
  const std::string out = scratch("cube");
  write_file(out + "/c.json", write_polytope_json(Polyhedron::box(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3))));
  const Run r = cli({"plot", out + "/c.json", "--out", out});
  CHECK(r.code == 2);
  CHECK(r.err.find("--axes") != std::string::npos);
  CHECK(cli({"plot", out + "/c.json", "--axes", "0,2", "--out", out}).code == 0);
}

TEST_CASE("installed binary reports stable exit codes") {
  const std::string cmd = std::string(GRIDHULL_CLI_PATH) + " check --net " + six("sixbus_strong.json") + " --agg " +
                          six("sixbus_agg.json") + " --y 9,-9,0 > /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 11);
}
