#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "gridhull/polytope.hpp"

namespace gridhull {

struct Bus {
  int id = 0;
  double demand = 0.0;   // MW
  double gen_max = 0.0;  // MW
  double gen_dispatch = 0.0;  // MW, base-case output when the source has one
};

struct Line {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  double susceptance = 1.0;  // p.u.
  double limit = 0.0;        // MW
  bool unlimited = false;    // limit is a stand-in cap, not a rating
};

// DC network. Buses and lines keep their input order; injections and flows
// are indexed by that order.
struct NetworkModel {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Line> lines;

  Eigen::Index n_bus() const { return static_cast<Eigen::Index>(buses.size()); }
  Eigen::Index n_line() const { return static_cast<Eigen::Index>(lines.size()); }
  // Position of a bus id; throws InputError for unknown ids.
  Eigen::Index bus_index(int id) const;
  Eigen::Index line_index(int id) const;
};

// Ids unique, endpoints valid and distinct, data finite, limits positive,
// susceptances nonzero. Does not check connectivity.
void validate(const NetworkModel& net);

// Connected components as lists of bus positions, ordered by smallest member.
std::vector<std::vector<Eigen::Index>> components(const NetworkModel& net);

// validate() plus a single component; StructuralError lists the islands.
void require_connected(const NetworkModel& net);

inline constexpr double kBalanceTol = 1e-6;  // MW

// Dense injection shift factors (n_line x n_bus, MW -> MW). The column of the
// reference bus is zero. Throws ResourceError when the dense matrix would
// exceed `max_entries`.
Eigen::MatrixXd isf_matrix(const NetworkModel& net, std::optional<Eigen::Index> reference = {},
                           Eigen::Index max_entries = 20'000'000);

// Line flows for a balanced injection; InputError reports the imbalance.
Eigen::VectorXd dc_flows(const NetworkModel& net, const Eigen::VectorXd& x);

// {x : 0 <= x_i + demand_i <= gen_max_i, sum x = 0}.
Polyhedron generator_polyhedron(const NetworkModel& net);

// {x : |ISF x| <= limit, sum x = 0}, 2 * n_line rows (+ then -).
Polyhedron line_polyhedron(const NetworkModel& net);

bool is_feasible(const NetworkModel& net, const Eigen::VectorXd& x, double tol = kBalanceTol);

// Sparse DC relations in angle variables, for networks too large for a dense
// ISF. With theta(reference) = 0:
//   injection = bbus * theta,  flow = bf * theta.
struct SparseDc {
  Eigen::SparseMatrix<double, Eigen::ColMajor> bbus;  // n_bus x n_bus
  Eigen::SparseMatrix<double, Eigen::ColMajor> bf;    // n_line x n_bus
  Eigen::Index reference = 0;
};

SparseDc sparse_dc(const NetworkModel& net, Eigen::Index reference = 0);

}  // namespace gridhull
