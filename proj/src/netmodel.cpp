#include "gridhull/netmodel.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "gridhull/error.hpp"

namespace gridhull {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor>;

std::unordered_map<int, Eigen::Index> bus_positions(const NetworkModel& net) {
  std::unordered_map<int, Eigen::Index> pos;
  pos.reserve(net.buses.size());
  for (Eigen::Index i = 0; i < net.n_bus(); ++i) pos.emplace(net.buses[static_cast<size_t>(i)].id, i);
  return pos;
}

// Branch-bus incidence weighted by susceptance (flow = bf * theta) and the
// nodal matrix bbus = Cᵀ diag(b) C.
void assemble(const NetworkModel& net, SpMat& bf, SpMat& bbus) {
  const auto pos = bus_positions(net);
  const Eigen::Index n = net.n_bus();
  const Eigen::Index m = net.n_line();
  std::vector<Eigen::Triplet<double>> tf, tb;
  tf.reserve(static_cast<size_t>(2 * m));
  tb.reserve(static_cast<size_t>(4 * m));
  for (Eigen::Index k = 0; k < m; ++k) {
    const Line& l = net.lines[static_cast<size_t>(k)];
    const Eigen::Index a = pos.at(l.from_bus);
    const Eigen::Index b = pos.at(l.to_bus);
    tf.emplace_back(k, a, l.susceptance);
    tf.emplace_back(k, b, -l.susceptance);
    tb.emplace_back(a, a, l.susceptance);
    tb.emplace_back(b, b, l.susceptance);
    tb.emplace_back(a, b, -l.susceptance);
    tb.emplace_back(b, a, -l.susceptance);
  }
  bf.resize(m, n);
  bf.setFromTriplets(tf.begin(), tf.end());
  bbus.resize(n, n);
  bbus.setFromTriplets(tb.begin(), tb.end());
}

// Drop row and column `r`.
SpMat reduce(const SpMat& M, Eigen::Index r, bool drop_rows) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(M.nonZeros()));
  for (Eigen::Index j = 0; j < M.outerSize(); ++j) {
    if (j == r) continue;
    for (SpMat::InnerIterator it(M, j); it; ++it) {
      if (drop_rows && it.row() == r) continue;
      const Eigen::Index i = drop_rows && it.row() > r ? it.row() - 1 : it.row();
      t.emplace_back(i, j > r ? j - 1 : j, it.value());
    }
  }
  SpMat out(drop_rows ? M.rows() - 1 : M.rows(), M.cols() - 1);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

void factor(Eigen::SparseLU<SpMat>& lu, const SpMat& Br) {
  lu.analyzePattern(Br);
  lu.factorize(Br);
  if (lu.info() != Eigen::Success) throw StructuralError("nodal susceptance matrix is singular");
}

}  // namespace

Eigen::Index NetworkModel::bus_index(int id) const {
  for (Eigen::Index i = 0; i < n_bus(); ++i)
    if (buses[static_cast<size_t>(i)].id == id) return i;
  throw InputError("unknown bus id " + std::to_string(id));
}

Eigen::Index NetworkModel::line_index(int id) const {
  for (Eigen::Index i = 0; i < n_line(); ++i)
    if (lines[static_cast<size_t>(i)].id == id) return i;
  throw InputError("unknown line id " + std::to_string(id));
}

void validate(const NetworkModel& net) {
  if (net.buses.empty()) throw InputError("network has no buses");
  if (!(net.base_mva > 0.0) || !std::isfinite(net.base_mva)) throw InputError("base_mva must be positive");
  std::unordered_set<int> ids;
  for (const Bus& b : net.buses) {
    if (!ids.insert(b.id).second) throw InputError("duplicate bus id " + std::to_string(b.id));
    if (!std::isfinite(b.demand)) throw InputError("bus " + std::to_string(b.id) + ": demand not finite");
    if (!std::isfinite(b.gen_max) || b.gen_max < 0.0)
      throw InputError("bus " + std::to_string(b.id) + ": gen_max must be finite and >= 0");
  }
  std::unordered_set<int> line_ids;
  for (const Line& l : net.lines) {
    const std::string tag = "line " + std::to_string(l.id);
    if (!line_ids.insert(l.id).second) throw InputError("duplicate " + tag);
    if (!ids.count(l.from_bus) || !ids.count(l.to_bus)) throw InputError(tag + ": unknown endpoint");
    if (l.from_bus == l.to_bus) throw InputError(tag + ": endpoints coincide");
    if (!std::isfinite(l.susceptance) || l.susceptance == 0.0) throw InputError(tag + ": susceptance must be finite and nonzero");
    if (!std::isfinite(l.limit) || !(l.limit > 0.0)) throw InputError(tag + ": limit must be finite and > 0");
  }
}

std::vector<std::vector<Eigen::Index>> components(const NetworkModel& net) {
  const auto pos = bus_positions(net);
  std::vector<Eigen::Index> parent(net.buses.size());
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index v) {
    while (parent[static_cast<size_t>(v)] != v) {
      parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
      v = parent[static_cast<size_t>(v)];
    }
    return v;
  };
  for (const Line& l : net.lines) {
    const auto a = find(pos.at(l.from_bus));
    const auto b = find(pos.at(l.to_bus));
    if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<std::vector<Eigen::Index>> out;
  std::unordered_map<Eigen::Index, size_t> slot;
  for (Eigen::Index i = 0; i < net.n_bus(); ++i) {
    const auto r = find(i);
    auto [it, fresh] = slot.emplace(r, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(i);
  }
  return out;
}

void require_connected(const NetworkModel& net) {
  validate(net);
  const auto comps = components(net);
  if (comps.size() <= 1) return;
  std::ostringstream os;
  os << "network has " << comps.size() << " components:";
  for (const auto& c : comps) {
    os << " {";
    for (size_t k = 0; k < c.size() && k < 8; ++k)
      os << (k ? "," : "") << net.buses[static_cast<size_t>(c[k])].id;
    if (c.size() > 8) os << ",... (" << c.size() << " buses)";
    os << "}";
  }
  throw StructuralError(os.str());
}

Eigen::MatrixXd isf_matrix(const NetworkModel& net, std::optional<Eigen::Index> reference,
                           Eigen::Index max_entries) {
  require_connected(net);
  const Eigen::Index n = net.n_bus();
  const Eigen::Index m = net.n_line();
  if (m * n > max_entries)
    throw ResourceError("dense ISF would need " + std::to_string(m * n) + " entries");
  const Eigen::Index ref = reference.value_or(0);
  if (ref < 0 || ref >= n) throw InputError("reference bus position out of range");
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, n);
  if (n == 1) return H;

  SpMat bf, bbus;
  assemble(net, bf, bbus);
  Eigen::SparseLU<SpMat> lu;
  factor(lu, reduce(bbus, ref, true));
  // Br symmetric: ISFᵀ (reduced) = Br⁻¹ bf_rᵀ.
  const Eigen::MatrixXd rhs = Eigen::MatrixXd(reduce(bf, ref, false)).transpose();
  const Eigen::MatrixXd Z = lu.solve(rhs);
  for (Eigen::Index j = 0, c = 0; j < n; ++j) {
    if (j == ref) continue;
    H.col(j) = Z.row(c++).transpose();
  }
  // Remove the uniform-shift component so the matrix no longer depends on the
  // reference bus and every row sums to zero.
  const Eigen::VectorXd mean = H.rowwise().mean();
  H.colwise() -= mean;
  return H;
}

Eigen::VectorXd dc_flows(const NetworkModel& net, const Eigen::VectorXd& x) {
  require_connected(net);
  if (x.size() != net.n_bus()) throw InputError("injection length does not match bus count");
  const double imbalance = x.sum();
  if (std::abs(imbalance) > kBalanceTol) {
    std::ostringstream os;
    os << "injection is unbalanced by " << imbalance << " MW";
    throw InputError(os.str());
  }
  if (net.n_bus() == 1) return Eigen::VectorXd::Zero(net.n_line());
  SpMat bf, bbus;
  assemble(net, bf, bbus);
  Eigen::SparseLU<SpMat> lu;
  factor(lu, reduce(bbus, 0, true));
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(net.n_bus());
  theta.tail(net.n_bus() - 1) = lu.solve(x.tail(net.n_bus() - 1));
  return bf * theta;
}

Polyhedron generator_polyhedron(const NetworkModel& net) {
  validate(net);
  const Eigen::Index n = net.n_bus();
  Eigen::MatrixXd A(2 * n, n);
  A << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Bus& bus = net.buses[static_cast<size_t>(i)];
    b(i) = bus.gen_max - bus.demand;
    b(n + i) = bus.demand;
  }
  return Polyhedron(std::move(A), std::move(b), Eigen::MatrixXd::Ones(1, n), Eigen::VectorXd::Zero(1));
}

Polyhedron line_polyhedron(const NetworkModel& net) {
  const Eigen::MatrixXd H = isf_matrix(net);
  const Eigen::Index m = net.n_line();
  const Eigen::Index n = net.n_bus();
  Eigen::MatrixXd A(2 * m, n);
  A << H, -H;
  Eigen::VectorXd b(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) b(k) = b(m + k) = net.lines[static_cast<size_t>(k)].limit;
  return Polyhedron(std::move(A), std::move(b), Eigen::MatrixXd::Ones(1, n), Eigen::VectorXd::Zero(1));
}

bool is_feasible(const NetworkModel& net, const Eigen::VectorXd& x, double tol) {
  if (x.size() != net.n_bus()) throw InputError("injection length does not match bus count");
  if (std::abs(x.sum()) > tol) return false;
  for (Eigen::Index i = 0; i < net.n_bus(); ++i) {
    const Bus& b = net.buses[static_cast<size_t>(i)];
    if (x(i) + b.demand < -tol || x(i) + b.demand > b.gen_max + tol) return false;
  }
  const Eigen::VectorXd flows = dc_flows(net, x);
  for (Eigen::Index k = 0; k < net.n_line(); ++k)
    if (std::abs(flows(k)) > net.lines[static_cast<size_t>(k)].limit + tol) return false;
  return true;
}

SparseDc sparse_dc(const NetworkModel& net, Eigen::Index reference) {
  require_connected(net);
  if (reference < 0 || reference >= net.n_bus()) throw InputError("reference bus position out of range");
  SparseDc out;
  assemble(net, out.bf, out.bbus);
  out.bf.makeCompressed();
  out.bbus.makeCompressed();
  out.reference = reference;
  return out;
}

}  // namespace gridhull
