#include "pcxray/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace pcx {

namespace {

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a < 0.0) a += 2.0 * M_PI;
  return a;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

}  // namespace

Tiling::Tiling(std::vector<Vec2> vertices, std::vector<Triangle> triangles, Domain domain)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), domain_(std::move(domain)) {
  const int nv = static_cast<int>(vertices_.size());
  for (auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k)
      if (tri.v[k] < 0 || tri.v[k] >= nv)
        throw Error(ErrorCode::BadInput, "Tiling: triangle vertex index out of range");
    const Vec2& a = vertices_[tri.v[0]];
    const Vec2& b = vertices_[tri.v[1]];
    const Vec2& c = vertices_[tri.v[2]];
    if (cross2(b - a, c - a) < 0.0) {
      std::swap(tri.v[1], tri.v[2]);
      std::swap(tri.edges[0], tri.edges[2]);
    }
  }
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      int u = triangles_[t].v[k], w = triangles_[t].v[(k + 1) % 3];
      if (u > w) std::swap(u, w);
      adjacency_[{u, w}].push_back(t);
    }
  }
}

double Tiling::boundary_angle(int vertex) const {
  const Vec2& p = vertices_[vertex];
  switch (domain_.kind) {
    case Domain::Kind::Ellipse:
      return wrap_2pi(std::atan2(p.y() / domain_.b, p.x() / domain_.a));
    default:
      return wrap_2pi(std::atan2(p.y(), p.x()));
  }
}

namespace {

// Chart parameter angle of an arbitrary boundary point.
double boundary_param(const Domain& dom, const Vec2& p) {
  if (dom.kind == Domain::Kind::Ellipse) return wrap_2pi(std::atan2(p.y() / dom.b, p.x() / dom.a));
  return wrap_2pi(std::atan2(p.y(), p.x()));
}

// Points along the minor boundary arc joining u to w (inclusive).
std::vector<Vec2> arc_polyline(const Domain& dom, const Vec2& u, const Vec2& w, int n) {
  const double tu = boundary_param(dom, u);
  const double tw = boundary_param(dom, w);
  const double dt = wrap_pi(tw - tu);
  std::vector<Vec2> pts;
  pts.reserve(n + 1);
  for (int i = 0; i <= n; ++i) pts.push_back(dom.boundary_point(tu + dt * i / n));
  pts.front() = u;
  pts.back() = w;
  return pts;
}

}  // namespace

bool Tiling::triangle_contains(int tri, const Vec2& x, double tol) const {
  const Triangle& t = triangles_[tri];
  bool has_arc = false;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = vertices_[t.v[k]];
    const Vec2& b = vertices_[t.v[(k + 1) % 3]];
    if (t.edges[k] == EdgeKind::Arc) {
      has_arc = true;
      continue;
    }
    const double len = (b - a).norm();
    if (len == 0.0) return false;
    if (cross2(b - a, x - a) / len < -tol) return false;
  }
  if (has_arc) {
    const double gn = std::max(domain_.boundary_gradient(x).norm(), 1e-8);
    if (domain_.boundary_function(x) / gn > tol) return false;
  }
  return true;
}

double Tiling::skeleton_distance(int tri, const Vec2& x) const {
  const Triangle& t = triangles_[tri];
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = vertices_[t.v[k]];
    const Vec2& b = vertices_[t.v[(k + 1) % 3]];
    if (t.edges[k] == EdgeKind::Straight) {
      best = std::min(best, point_segment_distance(x, a, b));
    } else {
      best = std::min(best, std::min((x - a).norm(), (x - b).norm()));
      const double tu = boundary_param(domain_, a);
      const double tw = boundary_param(domain_, b);
      const double dt = wrap_pi(tw - tu);
      const double tx = tu + wrap_pi(boundary_param(domain_, x) - tu);
      const double lo = std::min(tu, tu + dt), hi = std::max(tu, tu + dt);
      if (tx >= lo - 1e-9 && tx <= hi + 1e-9) {
        const double gn = std::max(domain_.boundary_gradient(x).norm(), 1e-8);
        best = std::min(best, std::abs(domain_.boundary_function(x)) / gn);
      }
    }
  }
  return best;
}

double Tiling::triangle_area(int tri) const {
  const Triangle& t = triangles_[tri];
  std::vector<Vec2> poly;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = vertices_[t.v[k]];
    const Vec2& b = vertices_[t.v[(k + 1) % 3]];
    if (t.edges[k] == EdgeKind::Straight) {
      poly.push_back(a);
    } else {
      auto arc = arc_polyline(domain_, a, b, 64);
      arc.pop_back();
      poly.insert(poly.end(), arc.begin(), arc.end());
    }
  }
  double area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    area += cross2(p, q);
  }
  return 0.5 * area;
}

LocateResult locate(const Tiling& tiling, const Vec2& x) {
  int best_tri = -1;
  for (int t = 0; t < tiling.triangle_count(); ++t) {
    if (!tiling.triangle_contains(t, x, kSkeletonTol)) continue;
    if (tiling.skeleton_distance(t, x) < kSkeletonTol) return {t, true};
    return {t, false};
  }
  // Roundoff just outside an arc triangle still counts as skeleton contact.
  for (int t = 0; t < tiling.triangle_count(); ++t)
    if (tiling.skeleton_distance(t, x) < 1e-9) return {t, true};
  (void)best_tri;
  throw Error(ErrorCode::OutsideTiling, "locate: point outside the tiling");
}

int depth(const Tiling& tiling, const Vec2& x, double tol) {
  bool found = false;
  for (int t = 0; t < tiling.triangle_count(); ++t) {
    if (!tiling.triangle_contains(t, x, std::max(tol, kSkeletonTol))) continue;
    found = true;
    const Triangle& tr = tiling.triangles()[t];
    for (int k = 0; k < 3; ++k)
      if ((x - tiling.vertices()[tr.v[k]]).norm() <= tol) return 2;
    if (tiling.skeleton_distance(t, x) <= tol) return 1;
    return 0;
  }
  if (!found) throw Error(ErrorCode::OutsideTiling, "depth: point outside the tiling");
  return 0;
}

namespace {

// Direction (chart) of the edge k of triangle t leaving point x, where x is
// the edge endpoint vertices[from].
Vec2 edge_direction_from(const Tiling& tiling, const Triangle& t, int k, const Vec2& x, int other) {
  const Vec2& o = tiling.vertices()[other];
  if (t.edges[k] == EdgeKind::Straight) return (o - x).normalized();
  const Vec2 g = tiling.domain().boundary_gradient(x);
  Vec2 tan = perp(g).normalized();
  if (tan.dot(o - x) < 0.0) tan = -tan;
  return tan;
}

}  // namespace

TangentFan tangent_fan(const PiecewiseConstantFunction& f, const MetricField& metric, const Vec2& x) {
  (void)metric;  // conformal metrics preserve chart angles
  const Tiling& tiling = *f.tiling;
  const double tol = 1e-9;
  const int d = depth(tiling, x, tol);
  TangentFan fan;
  fan.base = x;
  if (d == 0) {
    const LocateResult lr = locate(tiling, x);
    fan.sectors.push_back({0.0, 2.0 * M_PI, f.values[lr.triangle]});
    return fan;
  }
  const double probe_eps = 1e-7;
  for (int t = 0; t < tiling.triangle_count(); ++t) {
    if (!tiling.triangle_contains(t, x, tol)) continue;
    if (tiling.skeleton_distance(t, x) > tol && d > 0) {
      // x interior to this triangle but on the skeleton of another: depth
      // inconsistency; still emit the full sector.
      fan.sectors.push_back({0.0, 2.0 * M_PI, f.values[t]});
      continue;
    }
    const Triangle& tr = tiling.triangles()[t];
    int at_vertex = -1;
    for (int k = 0; k < 3; ++k)
      if ((x - tiling.vertices()[tr.v[k]]).norm() <= tol) at_vertex = k;

    double a0, a1;
    if (at_vertex >= 0) {
      const int kprev = (at_vertex + 2) % 3;
      const Vec2 d1 = edge_direction_from(tiling, tr, at_vertex, x, tr.v[(at_vertex + 1) % 3]);
      const Vec2 d2 = edge_direction_from(tiling, tr, kprev, x, tr.v[kprev]);
      a0 = std::atan2(d1.y(), d1.x());
      a1 = std::atan2(d2.y(), d2.x());
    } else {
      // x on an open edge: the sector is the half-plane on the triangle side.
      int ke = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 3; ++k) {
        const Vec2& a = tiling.vertices()[tr.v[k]];
        const Vec2& b = tiling.vertices()[tr.v[(k + 1) % 3]];
        double dd;
        if (tr.edges[k] == EdgeKind::Straight) {
          dd = point_segment_distance(x, a, b);
        } else {
          const double gn = std::max(tiling.domain().boundary_gradient(x).norm(), 1e-8);
          dd = std::abs(tiling.domain().boundary_function(x)) / gn;
        }
        if (dd < bd) {
          bd = dd;
          ke = k;
        }
      }
      Vec2 dir;
      if (tr.edges[ke] == EdgeKind::Straight) {
        dir = (tiling.vertices()[tr.v[(ke + 1) % 3]] - tiling.vertices()[tr.v[ke]]).normalized();
      } else {
        dir = perp(tiling.domain().boundary_gradient(x)).normalized();
      }
      a0 = std::atan2(dir.y(), dir.x());
      a1 = a0 + M_PI;
    }
    // Orient the sector so that its bisector points into the triangle.
    double width = wrap_2pi(a1 - a0);
    if (width == 0.0) width = 2.0 * M_PI;
    const double mid = a0 + 0.5 * width;
    const Vec2 probe = x + probe_eps * Vec2(std::cos(mid), std::sin(mid));
    if (!tiling.triangle_contains(t, probe, 1e-12)) {
      std::swap(a0, a1);
      width = 2.0 * M_PI - width;
    }
    fan.sectors.push_back({wrap_2pi(a0), wrap_2pi(a0) + width, f.values[t]});
  }
  if (fan.sectors.empty()) throw Error(ErrorCode::OutsideTiling, "tangent_fan: point outside the tiling");
  std::sort(fan.sectors.begin(), fan.sectors.end(),
            [](const Sector& a, const Sector& b) { return a.start < b.start; });
  return fan;
}

TilingReport validate_tiling(const Tiling& tiling, const Domain& domain, int samples,
                             std::uint64_t seed) {
  TilingReport report;
  auto flag = [&](const std::string& msg) {
    if (report.violations.size() < 64) report.violations.push_back(msg);
  };
  const auto& verts = tiling.vertices();
  const auto& tris = tiling.triangles();
  const int nt = tiling.triangle_count();

  // Adjacency counts.
  for (const auto& [edge, owners] : tiling.adjacency()) {
    bool arc = false;
    for (int t : owners) {
      const Triangle& tr = tris[t];
      for (int k = 0; k < 3; ++k) {
        int u = tr.v[k], w = tr.v[(k + 1) % 3];
        if (std::minmax(u, w) == std::minmax(edge.first, edge.second) && tr.edges[k] == EdgeKind::Arc)
          arc = true;
      }
    }
    std::ostringstream os;
    if (arc && owners.size() != 1) {
      os << "arc edge (" << edge.first << "," << edge.second << ") in " << owners.size() << " triangles";
      flag(os.str());
    } else if (!arc && (owners.empty() || owners.size() > 2)) {
      os << "straight edge (" << edge.first << "," << edge.second << ") in " << owners.size()
         << " triangles";
      flag(os.str());
    }
  }

  // Arc edges must lie on the boundary and subtend less than pi.
  for (int t = 0; t < nt; ++t) {
    const Triangle& tr = tris[t];
    for (int k = 0; k < 3; ++k) {
      const Vec2& a = verts[tr.v[k]];
      const Vec2& b = verts[tr.v[(k + 1) % 3]];
      if (tr.edges[k] == EdgeKind::Arc) {
        if (std::abs(domain.boundary_function(a)) > 1e-9 || std::abs(domain.boundary_function(b)) > 1e-9)
          flag("arc edge endpoint off the boundary (triangle " + std::to_string(t) + ")");
        const double tu = boundary_param(domain, a);
        const double dt = std::abs(wrap_pi(boundary_param(domain, b) - tu));
        if (dt > M_PI - 1e-9) flag("arc edge subtends >= pi (triangle " + std::to_string(t) + ")");
      } else {
        // Interior straight edges must not graze the boundary mid-edge.
        for (int i = 1; i < 16; ++i) {
          const Vec2 p = a + (b - a) * (i / 16.0);
          if (domain.boundary_function(p) > -1e-10 && p != a && p != b) {
            flag("straight edge tangent to or outside the boundary (triangle " + std::to_string(t) + ")");
            break;
          }
        }
      }
    }
  }

  // Depth consistency: a vertex of one triangle may touch another only at a
  // vertex; shared vertex pairs must be shared edges.
  for (int vi = 0; vi < static_cast<int>(verts.size()); ++vi) {
    const Vec2& p = verts[vi];
    for (int t = 0; t < nt; ++t) {
      const Triangle& tr = tris[t];
      if (tr.v[0] == vi || tr.v[1] == vi || tr.v[2] == vi) continue;
      bool at_vertex = false;
      for (int k = 0; k < 3; ++k)
        if ((p - verts[tr.v[k]]).norm() <= 1e-9) at_vertex = true;
      if (at_vertex) continue;  // duplicate coordinates, caught elsewhere
      if (tiling.triangle_contains(t, p, -1e-9)) {
        flag("vertex " + std::to_string(vi) + " strictly inside triangle " + std::to_string(t));
      } else if (tiling.triangle_contains(t, p, 1e-9) && tiling.skeleton_distance(t, p) <= 1e-9) {
        flag("vertex " + std::to_string(vi) + " on an open edge of triangle " + std::to_string(t) +
             " (depth mismatch)");
      }
    }
  }
  for (int i = 0; i < nt; ++i)
    for (int j = i + 1; j < nt; ++j) {
      std::vector<int> shared;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if (tris[i].v[a] == tris[j].v[b]) shared.push_back(tris[i].v[a]);
      if (shared.size() == 2) {
        int u = shared[0], w = shared[1];
        if (u > w) std::swap(u, w);
        bool edge_i = false, edge_j = false;
        for (int k = 0; k < 3; ++k) {
          auto mk = [&](const Triangle& tr) {
            int x = tr.v[k], y = tr.v[(k + 1) % 3];
            if (x > y) std::swap(x, y);
            return std::make_pair(x, y);
          };
          if (mk(tris[i]) == std::make_pair(u, w)) edge_i = true;
          if (mk(tris[j]) == std::make_pair(u, w)) edge_j = true;
        }
        if (edge_i != edge_j)
          flag("triangles " + std::to_string(i) + "," + std::to_string(j) +
               " share two vertices without a common edge");
      }
    }

  // Disjoint interiors: interior probes of one triangle must not fall strictly
  // inside another; straight edges must not cross properly.
  for (int i = 0; i < nt; ++i) {
    const Triangle& tr = tris[i];
    Vec2 centroid = (verts[tr.v[0]] + verts[tr.v[1]] + verts[tr.v[2]]) / 3.0;
    std::vector<Vec2> probes{centroid};
    for (int k = 0; k < 3; ++k) probes.push_back(0.5 * (centroid + verts[tr.v[k]]));
    for (const Vec2& p : probes) {
      if (!tiling.triangle_contains(i, p, -1e-9)) continue;
      for (int j = 0; j < nt; ++j) {
        if (j == i) continue;
        if (tiling.triangle_contains(j, p, -1e-9))
          flag("interiors of triangles " + std::to_string(i) + "," + std::to_string(j) + " overlap");
      }
    }
  }
  for (int i = 0; i < nt; ++i)
    for (int j = i + 1; j < nt; ++j)
      for (int ka = 0; ka < 3; ++ka)
        for (int kb = 0; kb < 3; ++kb) {
          if (tris[i].edges[ka] == EdgeKind::Arc || tris[j].edges[kb] == EdgeKind::Arc) continue;
          const Vec2& a = verts[tris[i].v[ka]];
          const Vec2& b = verts[tris[i].v[(ka + 1) % 3]];
          const Vec2& c = verts[tris[j].v[kb]];
          const Vec2& d = verts[tris[j].v[(kb + 1) % 3]];
          const double den = cross2(b - a, d - c);
          if (std::abs(den) < 1e-14) continue;
          const double t = cross2(c - a, d - c) / den;
          const double u = cross2(c - a, b - a) / den;
          if (t > 1e-9 && t < 1.0 - 1e-9 && u > 1e-9 && u < 1.0 - 1e-9)
            flag("straight edges of triangles " + std::to_string(i) + "," + std::to_string(j) +
                 " intersect properly");
        }

  // Monte Carlo coverage of the domain interior.
  std::mt19937_64 rng(seed);
  const double R = 0.5 * domain.chart_diameter();
  std::uniform_real_distribution<double> coord(-R, R);
  int misses = 0;
  for (int n = 0; n < samples; ++n) {
    Vec2 p;
    do {
      p = Vec2(coord(rng), coord(rng));
    } while (!domain.inside(p, -1e-12));
    bool covered = false;
    for (int t = 0; t < nt && !covered; ++t) covered = tiling.triangle_contains(t, p, 1e-9);
    if (!covered) ++misses;
  }
  if (misses > 0)
    flag("coverage: " + std::to_string(misses) + "/" + std::to_string(samples) +
         " interior samples outside every triangle");
  return report;
}

}  // namespace pcx
