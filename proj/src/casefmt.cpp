#include "gridhull/casefmt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gridhull/error.hpp"

namespace gridhull {

using ojson = nlohmann::ordered_json;

namespace {

// ---- MATPOWER text -------------------------------------------------------

struct Table {
  std::vector<std::vector<double>> rows;
  std::vector<int> lines;  // source line of each row
  int line = 0;            // line of the assignment
};

class CaseScanner {
 public:
  explicit CaseScanner(const std::string& text) {
    // Strip comments, remember where each line starts.
    std::istringstream in(text);
    std::string ln;
    while (std::getline(in, ln)) {
      const auto pct = ln.find('%');
      if (pct != std::string::npos) ln.erase(pct);
      starts_.push_back(s_.size());
      s_ += ln;
      s_ += '\n';
    }
  }

  void run(std::map<std::string, Table>& tables, std::map<std::string, std::pair<std::string, int>>& scalars) {
    while (true) {
      skip_space();
      if (pos_ >= s_.size()) return;
      if (s_.compare(pos_, 4, "mpc.") != 0) {
        skip_line();
        continue;
      }
      const int at = line();
      pos_ += 4;
      std::string name;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) name += s_[pos_++];
      skip_blank();
      if (pos_ >= s_.size() || s_[pos_] != '=') {
        skip_line();
        continue;
      }
      ++pos_;
      skip_blank();
      if (pos_ < s_.size() && s_[pos_] == '[') {
        ++pos_;
        Table t = matrix(at);
        tables[name] = std::move(t);
        skip_statement_end();
      } else if (pos_ < s_.size() && s_[pos_] == '{') {
        const auto close = s_.find('}', pos_);
        if (close == std::string::npos) throw ParseError("unterminated cell array mpc." + name, at);
        pos_ = close + 1;
        skip_statement_end();
      } else {
        std::string value;
        while (pos_ < s_.size() && s_[pos_] != ';' && s_[pos_] != '\n') value += s_[pos_++];
        if (pos_ < s_.size() && s_[pos_] == ';') ++pos_;
        scalars[name] = {value, at};
      }
    }
  }

 private:
  int line() const {
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), pos_);
    return static_cast<int>(it - starts_.begin());
  }
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void skip_blank() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  void skip_line() {
    while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
  }
  void skip_statement_end() {
    skip_blank();
    if (pos_ < s_.size() && s_[pos_] == ';') ++pos_;
  }

  Table matrix(int at) {
    Table t;
    t.line = at;
    std::vector<double> row;
    int row_line = 0;
    auto flush = [&]() {
      if (row.empty()) return;
      if (!t.rows.empty() && row.size() != t.rows.front().size())
        throw ParseError("ragged matrix row: " + std::to_string(row.size()) + " entries, expected " +
                             std::to_string(t.rows.front().size()),
                         row_line);
      t.rows.push_back(std::move(row));
      t.lines.push_back(row_line);
      row.clear();
    };
    while (true) {
      if (pos_ >= s_.size()) throw ParseError("unterminated matrix", at);
      const char c = s_[pos_];
      if (c == ']') {
        flush();
        ++pos_;
        return t;
      }
      if (c == ';' || c == '\n') {
        flush();
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        ++pos_;
        continue;
      }
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) throw ParseError(std::string("unexpected character '") + c + "' in matrix", line());
      if (std::isnan(v)) throw ParseError("NaN matrix entry", line());
      if (row.empty()) row_line = line();
      row.push_back(v);
      pos_ += static_cast<size_t>(end - begin);
    }
  }

  std::string s_;
  std::vector<size_t> starts_;
  size_t pos_ = 0;
};

const Table& need_table(const std::map<std::string, Table>& tables, const std::string& name, size_t min_cols) {
  const auto it = tables.find(name);
  if (it == tables.end()) throw ParseError("missing table mpc." + name);
  const Table& t = it->second;
  if (!t.rows.empty() && t.rows.front().size() < min_cols)
    throw ParseError("mpc." + name + " needs at least " + std::to_string(min_cols) + " columns", t.line);
  return t;
}

int as_id(double v, int line) {
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ParseError("bus id is not an integer", line);
  return static_cast<int>(v);
}

// ---- JSON helpers --------------------------------------------------------

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const ojson& member(const ojson& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(path + "." + key, "missing");
  return *it;
}

double number(const ojson& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected finite number");
  return v;
}

int integer(const ojson& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected integer");
  return j.get<int>();
}

const ojson& array(const ojson& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected array");
  return j;
}

ojson parse_json(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string idx(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

Eigen::VectorXd vector_of(const ojson& j, const std::string& path) {
  array(j, path);
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], idx(path, i));
  return v;
}

Eigen::MatrixXd matrix_of(const ojson& j, Eigen::Index cols, const std::string& path) {
  array(j, path);
  Eigen::MatrixXd M(static_cast<Eigen::Index>(j.size()), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    const Eigen::VectorXd row = vector_of(j[i], idx(path, i));
    if (row.size() != cols) schema_error(idx(path, i), "expected " + std::to_string(cols) + " entries");
    M.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return M;
}

ojson vec_json(const Eigen::VectorXd& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ojson mat_json(const Eigen::MatrixXd& M) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) a.push_back(vec_json(M.row(i).transpose()));
  return a;
}

ojson poly_json(const Polyhedron& P) {
  ojson j;
  j["dim"] = P.dim();
  j["ineq"] = {{"A", mat_json(P.A())}, {"b", vec_json(P.b())}};
  j["eq"] = {{"E", mat_json(P.E())}, {"f", vec_json(P.f())}};
  return j;
}

Polyhedron poly_from(const ojson& j, const std::string& path) {
  const ojson& d = member(j, "dim", path);
  if (!d.is_number_integer() || d.get<long long>() < 0) schema_error(path + ".dim", "expected nonnegative integer");
  const auto dim = static_cast<Eigen::Index>(d.get<long long>());
  const ojson& ineq = member(j, "ineq", path);
  const ojson& eq = member(j, "eq", path);
  Eigen::MatrixXd A = matrix_of(member(ineq, "A", path + ".ineq"), dim, path + ".ineq.A");
  Eigen::VectorXd b = vector_of(member(ineq, "b", path + ".ineq"), path + ".ineq.b");
  Eigen::MatrixXd E = matrix_of(member(eq, "E", path + ".eq"), dim, path + ".eq.E");
  Eigen::VectorXd f = vector_of(member(eq, "f", path + ".eq"), path + ".eq.f");
  if (b.size() != A.rows()) schema_error(path + ".ineq.b", "length differs from A");
  if (f.size() != E.rows()) schema_error(path + ".eq.f", "length differs from E");
  return Polyhedron(std::move(A), std::move(b), std::move(E), std::move(f));
}

ojson union_json(const PolyUnion& U) {
  ojson j;
  j["dim"] = U.dim;
  j["empty"] = U.parts.empty();
  j["disjoint_interiors"] = U.disjoint_interiors;
  j["parts"] = ojson::array();
  for (const auto& P : U.parts) j["parts"].push_back(poly_json(P));
  return j;
}

}  // namespace

NetworkModel parse_matpower(const std::string& text, const CaseOptions& opt, std::vector<std::string>* warnings) {
  std::map<std::string, Table> tables;
  std::map<std::string, std::pair<std::string, int>> scalars;
  CaseScanner(text).run(tables, scalars);

  NetworkModel net;
  const auto base = scalars.find("baseMVA");
  if (base == scalars.end()) throw ParseError("missing mpc.baseMVA");
  {
    const std::string& v = base->second.first;
    char* end = nullptr;
    net.base_mva = std::strtod(v.c_str(), &end);
    while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == v.c_str() || (end && *end) || !(net.base_mva > 0))
      throw ParseError("mpc.baseMVA must be a positive number", base->second.second);
  }
  const Table& bus = need_table(tables, "bus", 13);
  const Table& gen = need_table(tables, "gen", 10);
  const Table& branch = need_table(tables, "branch", 13);

  auto finite = [](const Table& t, size_t r, std::initializer_list<size_t> cols) {
    for (size_t c : cols)
      if (!std::isfinite(t.rows[r][c]))
        throw ParseError("column " + std::to_string(c + 1) + " must be finite", t.lines[r]);
  };

  std::unordered_map<int, size_t> pos;
  for (size_t r = 0; r < bus.rows.size(); ++r) {
    finite(bus, r, {0, 2});
    const auto& row = bus.rows[r];
    const int id = as_id(row[0], bus.lines[r]);
    if (!pos.emplace(id, net.buses.size()).second) throw ParseError("duplicate bus id " + std::to_string(id), bus.lines[r]);
    net.buses.push_back(Bus{id, row[2], 0.0});
  }
  int pmin_warned = 0;
  for (size_t r = 0; r < gen.rows.size(); ++r) {
    const auto& row = gen.rows[r];
    finite(gen, r, {0, 1, 7, 8, 9});
    const int id = as_id(row[0], gen.lines[r]);
    const auto it = pos.find(id);
    if (it == pos.end()) throw ParseError("generator at unknown bus " + std::to_string(id), gen.lines[r]);
    if (!(row[7] > 0)) continue;
    net.buses[it->second].gen_max += row[8];
    net.buses[it->second].gen_dispatch += row[1];
    if (row[9] > 0) ++pmin_warned;
  }
  if (pmin_warned && warnings)
    warnings->push_back(std::to_string(pmin_warned) + " generators have Pmin > 0; lower limits set to 0");

  int unlimited = 0;
  for (size_t r = 0; r < branch.rows.size(); ++r) {
    const auto& row = branch.rows[r];
    finite(branch, r, {0, 1, 3, 5, 10});
    const int f = as_id(row[0], branch.lines[r]);
    const int t = as_id(row[1], branch.lines[r]);
    if (!pos.count(f) || !pos.count(t))
      throw ParseError("branch references unknown bus " + std::to_string(pos.count(f) ? t : f), branch.lines[r]);
    if (!(row[10] > 0)) continue;
    if (row[3] == 0.0) throw ParseError("branch with zero reactance", branch.lines[r]);
    Line l;
    l.id = static_cast<int>(r + 1);
    l.from_bus = f;
    l.to_bus = t;
    l.susceptance = 1.0 / row[3];
    if (row[5] > 0) {
      l.limit = row[5];
    } else {
      l.limit = opt.unlimited_mw;
      l.unlimited = true;
      ++unlimited;
    }
    net.lines.push_back(l);
  }
  if (unlimited && warnings)
    warnings->push_back(std::to_string(unlimited) + " branches have no rating; capped at " +
                        std::to_string(opt.unlimited_mw) + " MW");
  return net;
}

NetworkModel parse_network_json(const std::string& text) {
  const ojson j = parse_json(text);
  NetworkModel net;
  net.base_mva = number(member(j, "base_mva", "$"), "$.base_mva");
  const ojson& buses = array(member(j, "buses", "$"), "$.buses");
  for (size_t i = 0; i < buses.size(); ++i) {
    const std::string p = idx("$.buses", i);
    Bus b;
    b.id = integer(member(buses[i], "id", p), p + ".id");
    b.demand = number(member(buses[i], "demand_mw", p), p + ".demand_mw");
    b.gen_max = number(member(buses[i], "gen_max_mw", p), p + ".gen_max_mw");
    if (const auto it = buses[i].find("gen_mw"); it != buses[i].end()) b.gen_dispatch = number(*it, p + ".gen_mw");
    net.buses.push_back(b);
  }
  const ojson& lines = array(member(j, "lines", "$"), "$.lines");
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string p = idx("$.lines", i);
    Line l;
    l.id = integer(member(lines[i], "id", p), p + ".id");
    l.from_bus = integer(member(lines[i], "from", p), p + ".from");
    l.to_bus = integer(member(lines[i], "to", p), p + ".to");
    l.susceptance = number(member(lines[i], "susceptance_pu", p), p + ".susceptance_pu");
    l.limit = number(member(lines[i], "limit_mw", p), p + ".limit_mw");
    if (const auto it = lines[i].find("unlimited"); it != lines[i].end()) {
      if (!it->is_boolean()) schema_error(p + ".unlimited", "expected boolean");
      l.unlimited = it->get<bool>();
    }
    net.lines.push_back(l);
  }
  return net;
}

std::string write_network_json(const NetworkModel& net) {
  ojson j;
  j["base_mva"] = net.base_mva;
  j["buses"] = ojson::array();
  for (const Bus& b : net.buses) {
    ojson o = {{"id", b.id}, {"demand_mw", b.demand}, {"gen_max_mw", b.gen_max}};
    if (b.gen_dispatch != 0.0) o["gen_mw"] = b.gen_dispatch;
    j["buses"].push_back(std::move(o));
  }
  j["lines"] = ojson::array();
  for (const Line& l : net.lines) {
    ojson o = {{"id", l.id}, {"from", l.from_bus}, {"to", l.to_bus}, {"susceptance_pu", l.susceptance}, {"limit_mw", l.limit}};
    if (l.unlimited) o["unlimited"] = true;
    j["lines"].push_back(std::move(o));
  }
  return j.dump(1) + "\n";
}

AggregationMap parse_aggregation(const std::string& text, const NetworkModel& net) {
  const ojson j = parse_json(text);
  const ojson& regions = member(j, "regions", "$");
  if (!regions.is_object()) schema_error("$.regions", "expected object");
  std::unordered_map<int, size_t> pos;
  for (size_t i = 0; i < net.buses.size(); ++i) pos.emplace(net.buses[i].id, i);

  std::vector<Eigen::Index> region_of(net.buses.size(), -1);
  std::vector<std::string> names;
  std::vector<int> unknown, doubled;
  std::vector<std::string> empty_regions;
  for (const auto& [name, ids] : regions.items()) {
    const std::string p = "$.regions." + name;
    array(ids, p);
    if (ids.empty()) empty_regions.push_back(name);
    const auto r = static_cast<Eigen::Index>(names.size());
    names.push_back(name);
    for (size_t k = 0; k < ids.size(); ++k) {
      const int id = integer(ids[k], idx(p, k));
      const auto it = pos.find(id);
      if (it == pos.end()) {
        unknown.push_back(id);
        continue;
      }
      if (region_of[it->second] >= 0) doubled.push_back(id);
      region_of[it->second] = r;
    }
  }
  auto list = [](const auto& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size() && i < 20; ++i) os << (i ? ", " : "") << v[i];
    if (v.size() > 20) os << ", ... (" << v.size() << " total)";
    return os.str();
  };
  if (!unknown.empty()) throw ParseError("aggregation references unknown buses: " + list(unknown));
  if (!doubled.empty()) throw ParseError("buses assigned to more than one region: " + list(doubled));
  if (!empty_regions.empty()) throw ParseError("empty regions: " + list(empty_regions));
  std::vector<int> missing;
  for (size_t i = 0; i < region_of.size(); ++i)
    if (region_of[i] < 0) missing.push_back(net.buses[i].id);
  if (!missing.empty()) throw ParseError("buses not assigned to a region: " + list(missing));
  if (names.size() >= net.buses.size())
    throw ParseError("aggregation must have fewer regions than buses (" + std::to_string(names.size()) + " >= " +
                     std::to_string(net.buses.size()) + ")");
  const auto n = static_cast<Eigen::Index>(names.size());
  return AggregationMap::from_assignment(std::move(region_of), n, std::move(names));
}

std::string write_aggregation(const AggregationMap& agg, const NetworkModel& net) {
  ojson j;
  j["regions"] = ojson::object();
  for (Eigen::Index r = 0; r < agg.n_regions; ++r) {
    const std::string name = agg.names.empty() ? "r" + std::to_string(r) : agg.names[static_cast<size_t>(r)];
    ojson ids = ojson::array();
    for (Eigen::Index i : agg.members(r)) ids.push_back(net.buses[static_cast<size_t>(i)].id);
    j["regions"][name] = std::move(ids);
  }
  return j.dump(1) + "\n";
}

NtcSpec parse_ntc(const std::string& text, const NetworkModel& net) {
  const ojson j = parse_json(text);
  NtcSpec spec;
  const ojson& cors = array(member(j, "corridors", "$"), "$.corridors");
  for (size_t c = 0; c < cors.size(); ++c) {
    const std::string p = idx("$.corridors", c);
    Corridor cor;
    const ojson& nm = member(cors[c], "name", p);
    if (!nm.is_string()) schema_error(p + ".name", "expected string");
    cor.name = nm.get<std::string>();
    const ojson& lines = array(member(cors[c], "lines", p), p + ".lines");
    for (size_t k = 0; k < lines.size(); ++k) {
      const std::string q = idx(p + ".lines", k);
      array(lines[k], q);
      if (lines[k].size() != 2) schema_error(q, "expected [line id, coefficient]");
      const int id = integer(lines[k][0], q + "[0]");
      const double coef = number(lines[k][1], q + "[1]");
      if (coef != 1.0 && coef != -1.0) schema_error(q + "[1]", "coefficient must be +1 or -1");
      try {
        net.line_index(id);
      } catch (const InputError&) {
        schema_error(q + "[0]", "unknown line id " + std::to_string(id));
      }
      cor.terms.emplace_back(id, coef);
    }
    spec.corridors.push_back(std::move(cor));
  }
  const auto n = static_cast<Eigen::Index>(spec.corridors.size());
  auto optional_vec = [&](const char* key) -> Eigen::VectorXd {
    const auto it = j.find(key);
    if (it == j.end()) return Eigen::VectorXd();
    Eigen::VectorXd v = vector_of(*it, std::string("$.") + key);
    if (v.size() != n) schema_error(std::string("$.") + key, "expected one entry per corridor");
    return v;
  };
  spec.bounds = optional_vec("bounds_mw");
  spec.nominal = optional_vec("nominal");
  if (spec.nominal.size() == 0) spec.nominal = Eigen::VectorXd::Ones(n);
  spec.weights = optional_vec("weights");
  if (spec.weights.size() == 0) spec.weights = Eigen::VectorXd::Ones(n);
  return spec;
}

std::string write_ntc(const NtcSpec& spec) {
  ojson j;
  j["corridors"] = ojson::array();
  for (const auto& c : spec.corridors) {
    ojson lines = ojson::array();
    for (const auto& [id, coef] : c.terms) lines.push_back({id, coef});
    j["corridors"].push_back({{"name", c.name}, {"lines", lines}});
  }
  if (spec.bounds.size()) j["bounds_mw"] = vec_json(spec.bounds);
  if (spec.nominal.size()) j["nominal"] = vec_json(spec.nominal);
  if (spec.weights.size()) j["weights"] = vec_json(spec.weights);
  return j.dump(1) + "\n";
}

std::string write_polytope_json(const Polyhedron& P) { return poly_json(P).dump(1) + "\n"; }

std::string write_polytope_json(const PolyUnion& U) { return union_json(U).dump(1) + "\n"; }

std::string write_polytope_json(const ApproxSet& a) {
  ojson j;
  j["dim"] = a.dim;
  ojson inner;
  inner["vertices"] = ojson::array();
  for (const auto& v : a.inner_vertices) inner["vertices"].push_back(vec_json(v));
  if (a.has_inner_hrep) inner["hrep"] = poly_json(a.inner);
  j["inner"] = std::move(inner);
  j["outer"] = poly_json(a.outer);
  j["gap"] = a.gap;
  j["directions"] = ojson::array();
  for (size_t i = 0; i < a.directions.size(); ++i)
    j["directions"].push_back({{"d", vec_json(a.directions[i])}, {"support", a.support_values[i]}});
  return j.dump(1) + "\n";
}

Polyhedron parse_polytope_json(const std::string& text) { return poly_from(parse_json(text), "$"); }

PolyUnion parse_polyunion_json(const std::string& text) {
  const ojson j = parse_json(text);
  PolyUnion U;
  const ojson& d = member(j, "dim", "$");
  if (!d.is_number_integer() || d.get<long long>() < 0) schema_error("$.dim", "expected nonnegative integer");
  U.dim = static_cast<Eigen::Index>(d.get<long long>());
  const ojson& flag = member(j, "disjoint_interiors", "$");
  if (!flag.is_boolean()) schema_error("$.disjoint_interiors", "expected boolean");
  U.disjoint_interiors = flag.get<bool>();
  const ojson& parts = array(member(j, "parts", "$"), "$.parts");
  for (size_t i = 0; i < parts.size(); ++i) {
    Polyhedron P = poly_from(parts[i], idx("$.parts", i));
    if (P.dim() != U.dim) schema_error(idx("$.parts", i) + ".dim", "differs from union dimension");
    U.parts.push_back(std::move(P));
  }
  return U;
}

ApproxSet parse_approx_json(const std::string& text) {
  const ojson j = parse_json(text);
  ApproxSet a;
  a.dim = integer(member(j, "dim", "$"), "$.dim");
  const ojson& inner = member(j, "inner", "$");
  const ojson& verts = array(member(inner, "vertices", "$.inner"), "$.inner.vertices");
  for (size_t i = 0; i < verts.size(); ++i) {
    Eigen::VectorXd v = vector_of(verts[i], idx("$.inner.vertices", i));
    if (v.size() != a.dim) schema_error(idx("$.inner.vertices", i), "wrong length");
    a.inner_vertices.push_back(std::move(v));
  }
  if (const auto it = inner.find("hrep"); it != inner.end()) {
    a.inner = poly_from(*it, "$.inner.hrep");
    a.has_inner_hrep = true;
  }
  a.outer = poly_from(member(j, "outer", "$"), "$.outer");
  a.gap = number(member(j, "gap", "$"), "$.gap");
  if (const auto it = j.find("directions"); it != j.end()) {
    for (size_t i = 0; i < it->size(); ++i) {
      const std::string p = idx("$.directions", i);
      a.directions.push_back(vector_of(member((*it)[i], "d", p), p + ".d"));
      a.support_values.push_back(number(member((*it)[i], "support", p), p + ".support"));
    }
  }
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

}  // namespace gridhull
