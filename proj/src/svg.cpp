#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "gridhull/cli.hpp"

namespace gridhull {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 180, kTop = 30, kBottom = 60;

const char* const kFills[] = {"#e41a1c", "#ffd92f", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#999999"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const std::vector<PlotLayer>& layers, const std::string& xlabel, const std::string& ylabel) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& l : layers)
    for (const auto& poly : l.polygons)
      for (const auto& p : poly) {
        x0 = std::min(x0, p.x() / 1000.0);
        x1 = std::max(x1, p.x() / 1000.0);
        y0 = std::min(y0, p.y() / 1000.0);
        y1 = std::max(y1, p.y() / 1000.0);
      }
  if (!std::isfinite(x0)) x0 = y0 = -1, x1 = y1 = 1;
  const double padx = std::max(0.05 * (x1 - x0), 0.1), pady = std::max(0.05 * (y1 - y0), 0.1);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto sy = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  // Grid and ticks.
  os << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  const double stx = nice_step(x1 - x0), sty = nice_step(y1 - y0);
  for (double v = std::ceil(x0 / stx) * stx; v <= x1; v += stx)
    os << "<line x1=\"" << num(sx(v)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(sx(v)) << "\" y2=\""
       << num(kTop + ph) << "\"/>\n";
  for (double v = std::ceil(y0 / sty) * sty; v <= y1; v += sty)
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(v)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
       << num(sy(v)) << "\"/>\n";
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (double v = std::ceil(x0 / stx) * stx; v <= x1; v += stx)
    os << "<text x=\"" << num(sx(v)) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">" << num(v)
       << "</text>\n";
  for (double v = std::ceil(y0 / sty) * sty; v <= y1; v += sty)
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(v) + 4) << "\" text-anchor=\"end\">" << num(v)
       << "</text>\n";
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15) << "\" text-anchor=\"middle\">"
     << escape(xlabel) << " [GW]</text>\n";
  os << "<text x=\"20\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << num(kTop + ph / 2) << ")\">" << escape(ylabel) << " [GW]</text>\n</g>\n";

  for (size_t i = 0; i < layers.size(); ++i) {
    const char* fill = kFills[i % (sizeof kFills / sizeof *kFills)];
    os << "<g fill=\"" << fill << "\" fill-opacity=\"0.6\" stroke=\"black\" stroke-width=\"1\">\n";
    for (const auto& poly : layers[i].polygons) {
      if (poly.empty()) continue;
      os << "<path d=\"";
      for (size_t k = 0; k < poly.size(); ++k)
        os << (k ? " L " : "M ") << num(sx(poly[k].x() / 1000.0)) << " " << num(sy(poly[k].y() / 1000.0));
      os << " Z\"/>\n";
    }
    os << "</g>\n";
  }

  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (size_t i = 0; i < layers.size(); ++i) {
    const double y = kTop + 10 + 22.0 * static_cast<double>(i);
    os << "<rect x=\"" << num(kWidth - kRight + 20) << "\" y=\"" << num(y) << "\" width=\"14\" height=\"14\" fill=\""
       << kFills[i % (sizeof kFills / sizeof *kFills)] << "\" fill-opacity=\"0.6\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(kWidth - kRight + 40) << "\" y=\"" << num(y + 12) << "\">" << escape(layers[i].label)
       << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace gridhull
