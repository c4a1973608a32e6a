#include "gridhull/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "gridhull/capacity.hpp"
#include "gridhull/casefmt.hpp"
#include "gridhull/error.hpp"
#include "gridhull/setdiff.hpp"

namespace gridhull {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Options {
  std::string net, agg, ntc, out = ".", method = "auto";
  unsigned seed = 42;
  int budget = 64;
  double tol_mw = 1.0;
  int exact_threshold = 12;
  std::vector<double> weights;
  int search = 0;
  bool verify = false;
  std::vector<double> y_gw;
  double ttc = 0, trm = 0, ltc = 0, aac = 0;
  std::vector<std::string> files, labels;
  std::string axes;
};

// Exit-code carrier for outcomes that are not exceptions of the library.
struct Exit {
  int code;
  std::string message;
};

std::string gw(double mw) {
  if (std::isinf(mw)) return mw > 0 ? "inf" : "-inf";
  char buf[48];
  const double v = mw / 1000.0;
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

std::string gw_vec(const Eigen::VectorXd& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + gw(v(i));
  return s + ")";
}

NetworkModel load_network(const Options& o) {
  if (o.net.empty()) throw InputError("--net is required");
  const std::string text = read_file(o.net);
  NetworkModel net;
  if (fs::path(o.net).extension() == ".m") {
    net = parse_matpower(text);
  } else {
    net = parse_network_json(text);
  }
  require_connected(net);
  return net;
}

AggregationMap load_aggregation(const Options& o, const NetworkModel& net) {
  if (o.agg.empty()) throw InputError("--agg is required");
  return parse_aggregation(read_file(o.agg), net);
}

NtcSpec load_ntc(const Options& o, const NetworkModel& net) {
  if (o.ntc.empty()) throw InputError("--ntc is required");
  return parse_ntc(read_file(o.ntc), net);
}

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

Eigen::Index effective_dim(const Polyhedron& P) {
  if (P.num_eq() == 0) return P.dim();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(P.E());
  return P.dim() - lu.rank();
}

void print_set(std::ostream& out, const std::string& name, const Polyhedron& P) {
  out << name << ": " << P.num_ineq() << " inequalities, " << P.num_eq() << " equalities\n";
  if (effective_dim(P) > 2) return;
  for (const auto& v : vertices_2d(P)) out << "  vertex " << gw_vec(v) << " GW\n";
}

bool use_exact(const Options& o, const NetworkModel& net) {
  if (o.method == "exact") return true;
  if (o.method == "approx") return false;
  return net.n_bus() <= o.exact_threshold;
}

int cmd_project(const Options& o, std::ostream& out) {
  const NetworkModel net = load_network(o);
  const AggregationMap agg = load_aggregation(o, net);
  const Polyhedron pgt = generator_image(net, agg);
  if (is_empty(pgt)) throw Exit{exit_code::kInfeasible, "generator constraints are infeasible"};
  write_file(out_path(o, "PGt.json"), write_polytope_json(pgt));
  print_set(out, "PGt", pgt);

  if (use_exact(o, net)) {
    const Polyhedron pl = intersect(generator_polyhedron(net), line_polyhedron(net));
    const Polyhedron plt = image_exact(pl, agg);
    if (is_empty(plt)) throw Exit{exit_code::kInfeasible, "line constraints leave no feasible injection"};
    write_file(out_path(o, "PLt.json"), write_polytope_json(plt));
    print_set(out, "PLt", plt);
  } else {
    ApproxOptions opt;
    opt.budget = o.budget;
    opt.tol = o.tol_mw;
    opt.seed = o.seed;
    const NetworkImageOracle oracle(net, agg);
    const ApproxSet plt = image_approx(oracle, opt);
    if (plt.inner_vertices.empty()) throw Exit{exit_code::kInfeasible, "line constraints leave no feasible injection"};
    write_file(out_path(o, "PLt.json"), write_polytope_json(plt));
    out << "PLt: approximate, " << plt.directions.size() << " queries, " << plt.inner_vertices.size()
        << " inner vertices, gap " << gw(plt.gap) << " GW\n";
  }

  if (!o.ntc.empty()) {
    const NtcSpec spec = load_ntc(o, net);
    if (spec.bounds.size() == static_cast<Eigen::Index>(spec.corridors.size())) {
      const Polyhedron pntct = image_exact(ntc_polyhedron(net, spec), agg);
      if (is_empty(pntct)) throw Exit{exit_code::kInfeasible, "NTC box admits no feasible injection"};
      write_file(out_path(o, "PNTCt.json"), write_polytope_json(pntct));
      print_set(out, "PNTCt", pntct);
    }
  }
  return exit_code::kOk;
}

ojson k_json(double k) { return std::isfinite(k) ? ojson(k) : ojson(nullptr); }

ojson vec_json(const Eigen::VectorXd& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

int cmd_ntc(const Options& o, std::ostream& out) {
  const NetworkModel net = load_network(o);
  NtcSpec spec = load_ntc(o, net);
  if (!o.weights.empty()) spec.weights = Eigen::Map<const Eigen::VectorXd>(o.weights.data(), static_cast<Eigen::Index>(o.weights.size()));
  validate(net, spec, false);

  if (o.verify) {
    const NtcVerification v = verify_ntc(net, spec);
    out << "safe: " << (v.safe ? "true" : "false") << "\n";
    ojson j;
    j["safe"] = v.safe;
    j["violations"] = ojson::array();
    for (const auto& [l, sign] : v.violations) {
      const int id = net.lines[static_cast<size_t>(l)].id;
      out << "  violated line " << id << (sign > 0 ? " (+)" : " (-)") << "\n";
      j["violations"].push_back({{"line_id", id}, {"sign", sign}});
    }
    write_file(out_path(o, "ntc_verify.json"), j.dump(1) + "\n");
    return exit_code::kOk;
  }

  if (o.search > 0) spec = ntc_direction_search(net, spec, o.search, o.seed);
  const NtcResult r = ntc_max_scaling(net, spec);

  ojson j;
  j["corridors"] = ojson::array();
  for (const auto& c : spec.corridors) j["corridors"].push_back(c.name);
  j["nominal"] = vec_json(spec.nominal);
  if (spec.weights.size()) j["weights"] = vec_json(spec.weights);
  j["table"] = ojson::array();
  out << "line  sign  k [GW]\n";
  for (const auto& row : r.table) {
    const int id = net.lines[static_cast<size_t>(row.line)].id;
    j["table"].push_back({{"line_id", id}, {"sign", row.sign}, {"k", k_json(row.k)}});
    char buf[64];
    std::snprintf(buf, sizeof buf, "%4d  %4s  %s\n", id, row.sign > 0 ? "+" : "-", gw(row.k).c_str());
    out << buf;
  }
  j["k_star"] = k_json(r.k_star);
  out << "k_star: " << gw(r.k_star) << " GW\n";
  if (r.binding_line >= 0) {
    const int id = net.lines[static_cast<size_t>(r.binding_line)].id;
    j["binding_line"] = {{"line_id", id}, {"sign", r.binding_sign}};
    out << "binding line: " << id << (r.binding_sign > 0 ? " (+)" : " (-)") << "\n";
  } else {
    j["binding_line"] = nullptr;
  }
  if (r.bounds.size()) {
    j["bounds_mw"] = vec_json(r.bounds);
    out << "b_ntc: " << gw_vec(r.bounds) << " GW\n";
  } else {
    j["bounds_mw"] = nullptr;
    out << "b_ntc: unbounded\n";
  }
  write_file(out_path(o, "ntc_result.json"), j.dump(1) + "\n");
  return exit_code::kOk;
}

int cmd_strong(const Options& o, std::ostream& out) {
  const NetworkModel net = load_network(o);
  const AggregationMap agg = load_aggregation(o, net);
  const PolyUnion pft = strong_feasible_set(net, agg);
  write_file(out_path(o, "pft.json"), write_polytope_json(pft));
  if (pft.empty()) {
    out << "PFt: empty\n";
  } else {
    out << "PFt: " << pft.parts.size() << " parts\n";
  }
  return exit_code::kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const NetworkModel net = load_network(o);
  const AggregationMap agg = load_aggregation(o, net);
  if (static_cast<Eigen::Index>(o.y_gw.size()) != agg.n_regions)
    throw InputError("--y needs one value per region (" + std::to_string(agg.n_regions) + ")");
  Eigen::VectorXd y(agg.n_regions);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = 1000.0 * o.y_gw[static_cast<size_t>(i)];
  const FeasibilityReport r = check_feasible(net, agg, y);
  out << "feasible: " << (r.feasible ? "true" : "false") << "\n";
  out << "strongly_feasible: " << (r.strongly_feasible ? "true" : "false") << "\n";
  if (r.worst_line)
    out << "worst_line: " << r.worst_line->line_id << " flow " << gw(r.worst_line->flow) << " GW, limit "
        << gw(r.worst_line->limit) << " GW\n";
  if (r.strongly_feasible) return exit_code::kOk;
  return r.feasible ? exit_code::kFeasibleOnly : exit_code::kInfeasibleState;
}

int cmd_account(const Options& o, std::ostream& out) {
  const AccountResult r = capacity_account({1000.0 * o.ttc, 1000.0 * o.trm, 1000.0 * o.ltc, 1000.0 * o.aac});
  out << "ntc: " << gw(r.ntc) << " GW\n";
  out << "atc: " << gw(r.atc) << " GW\n";
  if (r.clamped) out << "clamped: true\n";
  return exit_code::kOk;
}

std::vector<Eigen::VectorXd> hull_2d(const std::vector<Eigen::VectorXd>& pts) {
  if (pts.empty()) return {};
  return vertices_2d(hull_hrep(pts, 2));
}

Eigen::MatrixXd axis_selector(Eigen::Index dim, Eigen::Index a, Eigen::Index b) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2, dim);
  M(0, a) = 1.0;
  M(1, b) = 1.0;
  return M;
}

std::vector<Eigen::Vector2d> to_2d(const std::vector<Eigen::VectorXd>& vs) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& v : vs) out.emplace_back(v(0), v.size() > 1 ? v(1) : 0.0);
  return out;
}

std::vector<Eigen::Vector2d> polygon_of(const Polyhedron& P, const std::optional<std::pair<Eigen::Index, Eigen::Index>>& axes) {
  if (!axes) {
    if (P.dim() > 2) {
      if (effective_dim(P) > 2)
        throw InputError("set is " + std::to_string(effective_dim(P)) + "-dimensional; choose two regions with --axes");
      return to_2d(vertices_2d(image_exact(P, axis_selector(P.dim(), 0, 1))));
    }
    if (P.dim() == 1) return to_2d(vertices_2d(image_exact(P, Eigen::MatrixXd::Identity(1, 1))));
    return to_2d(vertices_2d(P));
  }
  return to_2d(vertices_2d(image_exact(P, axis_selector(P.dim(), axes->first, axes->second))));
}

std::optional<std::pair<Eigen::Index, Eigen::Index>> parse_axes(const Options& o, std::string* xlabel,
                                                                std::string* ylabel) {
  if (o.axes.empty()) return std::nullopt;
  const auto comma = o.axes.find(',');
  if (comma == std::string::npos) throw InputError("--axes expects two region names or indices separated by ','");
  const std::string names[2] = {o.axes.substr(0, comma), o.axes.substr(comma + 1)};
  Eigen::Index idx[2];
  std::optional<AggregationMap> agg;
  for (int k = 0; k < 2; ++k) {
    const std::string& s = names[k];
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
      idx[k] = std::stol(s);
      continue;
    }
    if (!agg) {
      if (o.agg.empty() || o.net.empty()) throw InputError("region names in --axes need --net and --agg");
      agg = load_aggregation(o, load_network(o));
    }
    const auto it = std::find(agg->names.begin(), agg->names.end(), s);
    if (it == agg->names.end()) throw InputError("unknown region '" + s + "' in --axes");
    idx[k] = it - agg->names.begin();
  }
  if (idx[0] == idx[1]) throw InputError("--axes needs two distinct regions");
  *xlabel = names[0];
  *ylabel = names[1];
  return std::make_pair(idx[0], idx[1]);
}

int cmd_plot(const Options& o, std::ostream& out) {
  if (o.files.empty()) throw InputError("plot needs at least one polytope file");
  if (!o.labels.empty() && o.labels.size() != o.files.size()) throw InputError("--labels needs one label per file");
  std::string xlabel = "y0", ylabel = "y1";
  const auto axes = parse_axes(o, &xlabel, &ylabel);

  std::vector<PlotLayer> layers;
  for (size_t i = 0; i < o.files.size(); ++i) {
    PlotLayer layer;
    layer.label = o.labels.empty() ? fs::path(o.files[i]).stem().string() : o.labels[i];
    const ojson j = ojson::parse(read_file(o.files[i]), nullptr, false);
    if (j.is_discarded()) throw ParseError(o.files[i] + ": invalid JSON");
    const std::string text = read_file(o.files[i]);
    Eigen::Index dim = 0;
    if (j.contains("parts")) {
      const PolyUnion U = parse_polyunion_json(text);
      dim = U.dim;
      if (axes && (axes->first >= dim || axes->second >= dim)) throw InputError("--axes index out of range");
      for (const auto& P : U.parts) layer.polygons.push_back(polygon_of(P, axes));
    } else if (j.contains("outer")) {
      const ApproxSet a = parse_approx_json(text);
      dim = a.dim;
      const auto sel = axes.value_or(std::make_pair(Eigen::Index{0}, Eigen::Index{1}));
      if (sel.first >= dim || sel.second >= dim) throw InputError("--axes index out of range");
      std::vector<Eigen::VectorXd> pts;
      for (const auto& v : a.inner_vertices) pts.push_back(Eigen::Vector2d(v(sel.first), v(sel.second)));
      layer.polygons.push_back(to_2d(hull_2d(pts)));
    } else {
      const Polyhedron P = parse_polytope_json(text);
      dim = P.dim();
      if (axes && (axes->first >= dim || axes->second >= dim)) throw InputError("--axes index out of range");
      layer.polygons.push_back(polygon_of(P, axes));
    }
    layers.push_back(std::move(layer));
  }

  std::string path = o.out;
  if (fs::path(path).extension() != ".svg") path = out_path(o, "plot.svg");
  write_file(path, render_svg(layers, xlabel, ylabel));
  out << "wrote " << path << "\n";
  return exit_code::kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transfer-capacity feasible sets for zonal DC network models", "gridhull"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--net", o.net, "network file (.json or MATPOWER .m)");
    c->add_option("--agg", o.agg, "region aggregation JSON");
    c->add_option("--ntc", o.ntc, "NTC corridor configuration JSON");
    c->add_option("--seed", o.seed, "random seed")->capture_default_str();
    c->add_option("--budget", o.budget, "support-query budget")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--tol-mw", o.tol_mw, "approximation tolerance in MW")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--out", o.out, "output directory")->capture_default_str();
  };

  auto* project = app.add_subcommand("project", "write PGt.json and PLt.json (and PNTCt.json with --ntc bounds)");
  common(project);
  project->add_option("--method", o.method, "exact | approx | auto")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "exact", "approx"}));
  project->add_option("--exact-max-buses", o.exact_threshold, "auto: exact up to this many buses")->capture_default_str();

  auto* ntc = app.add_subcommand("ntc", "optimal NTC scaling along the nominal direction");
  common(ntc);
  ntc->add_option("--weights", o.weights, "corridor weights for the direction search")->delimiter(',');
  ntc->add_option("--search", o.search, "number of random nominal directions to try");
  ntc->add_flag("--verify", o.verify, "check the configured bounds instead of computing new ones");

  auto* strong = app.add_subcommand("strong", "write the strongly feasible set pft.json");
  common(strong);

  auto* check = app.add_subcommand("check", "classify a region injection vector");
  common(check);
  check->add_option("--y", o.y_gw, "region injections in GW, comma separated")->delimiter(',')->required();

  auto* account = app.add_subcommand("account", "NTC and ATC from TTC, TRM, LTC and AAC (GW)");
  account->add_option("--ttc", o.ttc)->required();
  account->add_option("--trm", o.trm)->required();
  account->add_option("--ltc", o.ltc)->required();
  account->add_option("--aac", o.aac)->required();

  auto* plot = app.add_subcommand("plot", "overlay polytope files as an SVG");
  common(plot);
  plot->add_option("files", o.files, "polytope JSON files, drawn in order")->required();
  plot->add_option("--axes", o.axes, "two region names or indices, e.g. north,south");
  plot->add_option("--labels", o.labels, "legend labels")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_code::kOk : exit_code::kParse;
  }

  try {
    if (*project) return cmd_project(o, out);
    if (*ntc) return cmd_ntc(o, out);
    if (*strong) return cmd_strong(o, out);
    if (*check) return cmd_check(o, out);
    if (*account) return cmd_account(o, out);
    if (*plot) return cmd_plot(o, out);
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::kParse;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_code::kParse;
  } catch (const StructuralError& e) {
    err << "network error: " << e.what() << "\n";
    return exit_code::kParse;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return exit_code::kResource;
  } catch (const UnboundedError& e) {
    err << "unbounded: " << e.what() << "\n";
    return exit_code::kInfeasible;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return exit_code::kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kFailure;
  }
  return exit_code::kFailure;
}

}  // namespace gridhull
