#include "pcxray/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pcx {

namespace {

constexpr int kSize = 800;
constexpr double kMargin = 20.0;

struct Mapper {
  double scale;
  double half;
  double px(double x) const { return half + scale * x; }
  double py(double y) const { return half - scale * y; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fill_color(double v, double vmax) {
  // Blue (negative) to white (zero) to red (positive).
  const double u = vmax > 0.0 ? std::clamp(v / vmax, -1.0, 1.0) : 0.0;
  int r = 255, g = 255, b = 255;
  if (u > 0.0) {
    g = b = static_cast<int>(std::lround(255.0 * (1.0 - u)));
  } else if (u < 0.0) {
    r = g = static_cast<int>(std::lround(255.0 * (1.0 + u)));
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_svg(const Domain& domain, const Tiling& tiling, const std::vector<double>& values,
                       const std::vector<GeodesicPath>& overlays) {
  const double R = 0.5 * domain.chart_diameter();
  Mapper map{(kSize / 2.0 - kMargin) / R, kSize / 2.0};

  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n";

  for (int t = 0; t < tiling.triangle_count(); ++t) {
    const Triangle& tr = tiling.triangles()[t];
    std::ostringstream d;
    for (int k = 0; k < 3; ++k) {
      const Vec2& a = tiling.vertices()[tr.v[k]];
      const Vec2& b = tiling.vertices()[tr.v[(k + 1) % 3]];
      if (k == 0) d << "M " << num(map.px(a.x())) << " " << num(map.py(a.y())) << " ";
      if (tr.edges[k] == EdgeKind::Straight) {
        d << "L " << num(map.px(b.x())) << " " << num(map.py(b.y())) << " ";
      } else {
        // Resolve boundary arcs as short polylines; exact for any domain kind.
        const int n = 32;
        const auto bparam = [&](const Vec2& p) {
          if (domain.kind == Domain::Kind::Ellipse) return std::atan2(p.y() / domain.b, p.x() / domain.a);
          return std::atan2(p.y(), p.x());
        };
        const double tu = bparam(a);
        double dt = bparam(b) - tu;
        while (dt > M_PI) dt -= 2.0 * M_PI;
        while (dt <= -M_PI) dt += 2.0 * M_PI;
        for (int i = 1; i <= n; ++i) {
          const Vec2 p = domain.boundary_point(tu + dt * i / n);
          d << "L " << num(map.px(p.x())) << " " << num(map.py(p.y())) << " ";
        }
      }
    }
    d << "Z";
    const std::string fill = t < static_cast<int>(values.size()) ? fill_color(values[t], vmax) : "#eeeeee";
    svg << "<path class=\"triangle\" d=\"" << d.str() << "\" fill=\"" << fill
        << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  }

  // Domain boundary on top.
  {
    std::ostringstream d;
    const int n = 256;
    for (int i = 0; i <= n; ++i) {
      const Vec2 p = domain.boundary_point(2.0 * M_PI * i / n);
      d << (i == 0 ? "M " : "L ") << num(map.px(p.x())) << " " << num(map.py(p.y())) << " ";
    }
    d << "Z";
    svg << "<path class=\"boundary\" d=\"" << d.str()
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  }

  for (const auto& path : overlays) {
    std::ostringstream d;
    bool first = true;
    for (const auto& smp : path.samples) {
      d << (first ? "M " : "L ") << num(map.px(smp.x.x())) << " " << num(map.py(smp.x.y())) << " ";
      first = false;
    }
    svg << "<path class=\"geodesic\" d=\"" << d.str()
        << "\" fill=\"none\" stroke=\"#cc6600\" stroke-width=\"1.5\"/>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pcx
