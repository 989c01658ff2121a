#ifndef DSTAB_SVG_HPP
#define DSTAB_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dstab/trajectory.hpp"
#include "dstab/vec.hpp"

namespace dstab {

namespace svg_detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

struct Segment {
  double x0, y0, x1, y1;
};

// Marching squares on a sampled scalar field; emits one segment per crossed
// cell edge pair (no topology stitching; plenty for static plots).
inline std::vector<Segment> marching_squares(const std::vector<double>& grid, int nx, int ny,
                                             double level) {
  std::vector<Segment> segs;
  auto at = [&](int i, int j) { return grid[static_cast<std::size_t>(j) * nx + i]; };
  auto interp = [level](double a, double b) {
    const double d = b - a;
    return d == 0.0 ? 0.5 : (level - a) / d;
  };
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double v00 = at(i, j), v10 = at(i + 1, j), v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
      if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) || !std::isfinite(v11))
        continue;
      int c = 0;
      if (v00 > level) c |= 1;
      if (v10 > level) c |= 2;
      if (v11 > level) c |= 4;
      if (v01 > level) c |= 8;
      if (c == 0 || c == 15) continue;
      const double x = i, y = j;
      // edge midpoints by linear interpolation
      const double bx = x + interp(v00, v10), by = y;            // bottom
      const double rx = x + 1, ry = y + interp(v10, v11);        // right
      const double tx = x + interp(v01, v11), ty = y + 1;        // top
      const double lx = x, ly = y + interp(v00, v01);            // left
      auto add = [&segs](double ax, double ay, double cx, double cy) {
        segs.push_back({ax, ay, cx, cy});
      };
      switch (c) {
        case 1: case 14: add(lx, ly, bx, by); break;
        case 2: case 13: add(bx, by, rx, ry); break;
        case 3: case 12: add(lx, ly, rx, ry); break;
        case 4: case 11: add(tx, ty, rx, ry); break;
        case 5: add(lx, ly, tx, ty); add(bx, by, rx, ry); break;
        case 6: case 9: add(bx, by, tx, ty); break;
        case 7: case 8: add(lx, ly, tx, ty); break;
        case 10: add(lx, ly, bx, by); add(tx, ty, rx, ry); break;
        default: break;
      }
    }
  }
  return segs;
}

}  // namespace svg_detail

// Static SVG plot: contour lines of one or two scalar fields over a box plus
// the iterate polyline. Contour levels are log-spaced over the positive range
// of each field; a field spanning more than three decades is contoured in
// log scale automatically (override with force_log).
class SvgPlot {
 public:
  SvgPlot(Box box, int width = 760, int height = 760, int grid = 512)
      : box_(std::move(box)), w_(width), h_(height), grid_(grid) {}

  void add_contours(const std::function<double(const Vec&)>& field, const std::string& color,
                    int levels = 8, int force_log = -1) {
    std::vector<double> values(static_cast<std::size_t>(grid_) * grid_);
    double vmin = kInf, vmax = -kInf;
    for (int j = 0; j < grid_; ++j) {
      for (int i = 0; i < grid_; ++i) {
        Vec p = {box_.lo[0] + (box_.hi[0] - box_.lo[0]) * i / (grid_ - 1.0),
                 box_.lo[1] + (box_.hi[1] - box_.lo[1]) * j / (grid_ - 1.0)};
        double v = field(p);
        values[static_cast<std::size_t>(j) * grid_ + i] = v;
        if (std::isfinite(v) && v > 0.0) {
          vmin = std::min(vmin, v);
          vmax = std::max(vmax, v);
        }
      }
    }
    if (!(vmax > 0.0)) return;
    vmin = std::max(vmin, vmax * 1e-12);
    const bool log_scale = force_log >= 0 ? force_log > 0 : (vmax / vmin > 1e3);
    std::ostringstream path;
    for (int l = 0; l < levels; ++l) {
      const double frac = (l + 0.5) / levels;
      const double level = log_scale ? vmin * std::pow(vmax / vmin, frac)
                                     : vmin + (vmax - vmin) * frac;
      for (const auto& s : svg_detail::marching_squares(values, grid_, grid_, level)) {
        path << "M" << svg_detail::num(px(s.x0)) << ' ' << svg_detail::num(py(s.y0)) << "L"
             << svg_detail::num(px(s.x1)) << ' ' << svg_detail::num(py(s.y1));
      }
    }
    body_ << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"0.6\" opacity=\"0.7\"/>\n";
  }

  void add_trajectory(const Trajectory& t, const std::string& color = "#d62728") {
    std::ostringstream pts;
    for (const auto& p : t.points)
      pts << svg_detail::num(gx(p[0])) << ',' << svg_detail::num(gy(p[1])) << ' ';
    body_ << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.1\"/>\n";
    if (!t.points.empty()) {
      body_ << "<circle cx=\"" << svg_detail::num(gx(t.points.front()[0])) << "\" cy=\""
            << svg_detail::num(gy(t.points.front()[1])) << "\" r=\"3\" fill=\"" << color
            << "\"/>\n";
      body_ << "<circle cx=\"" << svg_detail::num(gx(t.points.back()[0])) << "\" cy=\""
            << svg_detail::num(gy(t.points.back()[1])) << "\" r=\"3\" fill=\"none\" stroke=\""
            << color << "\"/>\n";
    }
  }

  std::string render() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w_
       << "\" height=\"" << h_ << "\" viewBox=\"0 0 " << w_ << ' ' << h_ << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  // grid index -> pixel
  double px(double gi) const { return gi / (grid_ - 1.0) * w_; }
  double py(double gj) const { return h_ - gj / (grid_ - 1.0) * h_; }
  // data coords -> pixel
  double gx(double x) const { return (x - box_.lo[0]) / (box_.hi[0] - box_.lo[0]) * w_; }
  double gy(double y) const { return h_ - (y - box_.lo[1]) / (box_.hi[1] - box_.lo[1]) * h_; }

  Box box_;
  int w_, h_, grid_;
  std::ostringstream body_;
};

}  // namespace dstab

#endif  // DSTAB_SVG_HPP
