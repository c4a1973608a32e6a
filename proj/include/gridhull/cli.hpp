#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace gridhull {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kParse = 2;
inline constexpr int kInfeasible = 3;
inline constexpr int kResource = 4;
inline constexpr int kFeasibleOnly = 10;
inline constexpr int kInfeasibleState = 11;
}  // namespace exit_code

struct PlotLayer {
  std::string label;
  std::vector<std::vector<Eigen::Vector2d>> polygons;  // MW coordinates
};

// 800x600 SVG, axes in GW, layers drawn in order with a legend.
std::string render_svg(const std::vector<PlotLayer>& layers, const std::string& xlabel, const std::string& ylabel);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gridhull
