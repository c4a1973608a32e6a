#pragma once

#include <string>
#include <vector>

#include "gridhull/capacity.hpp"
#include "gridhull/netmodel.hpp"
#include "gridhull/polytope.hpp"
#include "gridhull/project.hpp"

namespace gridhull {

struct CaseOptions {
  double unlimited_mw = 99999.0;  // stand-in for rateA = 0
};

// MATPOWER structured-matrix subset. Generator lower limits are dropped (a
// warning is recorded when Pmin > 0); out-of-service generators and branches
// are skipped. Branch ids are their 1-based row numbers in the branch table.
NetworkModel parse_matpower(const std::string& text, const CaseOptions& opt = {},
                            std::vector<std::string>* warnings = nullptr);

NetworkModel parse_network_json(const std::string& text);
std::string write_network_json(const NetworkModel& net);

// {"regions": {"name": [bus ids], ...}} in declaration order. Requires fewer
// regions than buses.
AggregationMap parse_aggregation(const std::string& text, const NetworkModel& net);
std::string write_aggregation(const AggregationMap& agg, const NetworkModel& net);

// {"corridors": [{"name", "lines": [[line id, +-1], ...]}], "bounds_mw",
//  "nominal", "weights"}; every field but corridors is optional.
NtcSpec parse_ntc(const std::string& text, const NetworkModel& net);
std::string write_ntc(const NtcSpec& spec);

std::string write_polytope_json(const Polyhedron& P);
std::string write_polytope_json(const PolyUnion& U);
std::string write_polytope_json(const ApproxSet& a);
Polyhedron parse_polytope_json(const std::string& text);
PolyUnion parse_polyunion_json(const std::string& text);
ApproxSet parse_approx_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace gridhull
