#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridhull/netmodel.hpp"
#include "gridhull/polytope.hpp"
#include "gridhull/project.hpp"

namespace gridhull {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Corridor {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (line id, +1 or -1)
};

struct NtcSpec {
  std::vector<Corridor> corridors;
  Eigen::VectorXd bounds;   // MW, one per corridor
  Eigen::VectorXd nominal;  // >= 0, at least one positive
  Eigen::VectorXd weights;
};

// Checks line ids, coefficients and vector lengths. `need_bounds` also
// requires finite bounds.
void validate(const NetworkModel& net, const NtcSpec& spec, bool need_bounds);

// Corridor x line aggregation matrix.
Eigen::MatrixXd corridor_matrix(const NetworkModel& net, const NtcSpec& spec);

// PG rows plus corridor-flow <= bounds.
Polyhedron ntc_polyhedron(const NetworkModel& net, const NtcSpec& spec);

// Smallest k with some x in PG, corridor flows <= k * nominal and
// sign * flow_line >= limit. +inf when the line cannot reach its limit;
// DataError when the violation persists for arbitrarily small k.
double ntc_line_scaling(const NetworkModel& net, const NtcSpec& spec, Eigen::Index line, int sign);

struct LineScaling {
  Eigen::Index line = 0;
  int sign = 1;
  double k = kInfinity;
};

struct NtcResult {
  std::vector<LineScaling> table;  // line-major, + before -
  double k_star = kInfinity;
  Eigen::Index binding_line = -1;
  int binding_sign = 0;
  Eigen::VectorXd bounds;  // k_star * nominal; empty when k_star is infinite
};

NtcResult ntc_max_scaling(const NetworkModel& net, const NtcSpec& spec);

// Seeded search over nonnegative unit nominal directions maximizing
// weights · bounds. Returns the spec with nominal and bounds filled in;
// ties keep the earliest sample.
NtcSpec ntc_direction_search(const NetworkModel& net, const NtcSpec& corridors, int samples, unsigned seed = 42);

struct NtcVerification {
  bool safe = true;
  std::vector<std::pair<Eigen::Index, int>> violations;  // (line position, sign)
};

NtcVerification verify_ntc(const NetworkModel& net, const NtcSpec& spec, double eps_strict = 1e-6);

// T(PG) in closed form: per-region sums of the bus bounds plus sum y = 0.
Polyhedron generator_image(const NetworkModel& net, const AggregationMap& agg);

struct MappedSets {
  Polyhedron pg;
  Polyhedron pl;  // image of PG ∩ PL
  std::optional<Polyhedron> pntc;
};

// Exact images; PNTCt only when a spec with bounds is given.
MappedSets mapped_sets(const NetworkModel& net, const AggregationMap& agg, const NtcSpec* spec = nullptr);

// Images of PG ∩ {sign * flow_i >= limit_i}, skipping empty ones.
std::vector<Polyhedron> violation_images(const NetworkModel& net, const AggregationMap& agg);

// PGt minus every violation image.
PolyUnion strong_feasible_set(const NetworkModel& net, const AggregationMap& agg);

struct WorstLine {
  int line_id = 0;
  double flow = 0.0;   // MW, signed max over the fiber
  double limit = 0.0;  // MW
};

struct FeasibilityReport {
  bool feasible = false;
  bool strongly_feasible = false;
  std::optional<Eigen::VectorXd> witness;
  std::optional<WorstLine> worst_line;
};

FeasibilityReport check_feasible(const NetworkModel& net, const AggregationMap& agg, const Eigen::VectorXd& y,
                                 double tol = 1e-6);

// Support oracle for T(PG ∩ PL) on large networks, in angle variables with a
// sparse LP. Also answers fiber feasibility.
class NetworkImageOracle : public SupportOracle {
 public:
  NetworkImageOracle(const NetworkModel& net, const AggregationMap& agg);
  ~NetworkImageOracle() override;
  Eigen::Index dim() const override;
  SupportResult support(const Eigen::VectorXd& d) const override;
  // Some x in PG ∩ PL with T x = y.
  bool fiber_feasible(const Eigen::VectorXd& y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct CapacityAccount {
  double ttc = 0.0, trm = 0.0, ltc = 0.0, aac = 0.0;
};

struct AccountResult {
  double ntc = 0.0;
  double atc = 0.0;
  bool clamped = false;
};

AccountResult capacity_account(const CapacityAccount& a);

}  // namespace gridhull
