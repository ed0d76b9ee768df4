#include "pcxray/transform.hpp"

#include <algorithm>
#include <cmath>

namespace pcx {

BoundaryParam::BoundaryParam(const Domain& domain, const MetricField& metric, int resolution)
    : domain_(domain), metric_(metric) {
  t_grid_.resize(resolution + 1);
  s_grid_.resize(resolution + 1);
  double acc = 0.0;
  Vec2 prev = domain_.boundary_point(0.0);
  t_grid_[0] = 0.0;
  s_grid_[0] = 0.0;
  for (int i = 1; i <= resolution; ++i) {
    const double t = 2.0 * M_PI * i / resolution;
    const Vec2 p = domain_.boundary_point(t);
    const Vec2 mid = 0.5 * (prev + p);
    acc += metric_.conformal_factor(mid) * (p - prev).norm();
    t_grid_[i] = t;
    s_grid_[i] = acc;
    prev = p;
  }
  total_ = acc;
}

double BoundaryParam::param_of_arclength(double s) const {
  s = std::fmod(s, total_);
  if (s < 0.0) s += total_;
  const auto it = std::upper_bound(s_grid_.begin(), s_grid_.end(), s);
  const std::size_t hi = std::min<std::size_t>(it - s_grid_.begin(), s_grid_.size() - 1);
  const std::size_t lo = hi - 1;
  const double f = (s - s_grid_[lo]) / (s_grid_[hi] - s_grid_[lo]);
  return t_grid_[lo] + f * (t_grid_[hi] - t_grid_[lo]);
}

Vec2 BoundaryParam::point(double s) const { return domain_.boundary_point(param_of_arclength(s)); }

void BoundaryParam::frame(double s, Vec2* x, Vec2* tangent, Vec2* inward_normal) const {
  const Vec2 p = point(s);
  const Vec2 g = domain_.boundary_gradient(p);
  const Vec2 nu = -g.normalized();
  // Tangent oriented along increasing arclength (counterclockwise).
  Vec2 tan = perp(g).normalized();
  if (x) *x = p;
  if (tangent) *tangent = tan;
  if (inward_normal) *inward_normal = nu;
}

Vec2 BoundaryParam::inward_direction(double s, double theta) const {
  Vec2 x, tan, nu;
  frame(s, &x, &tan, &nu);
  return std::cos(theta) * tan + std::sin(theta) * nu;
}

namespace {

// Splits a chart segment of Riemannian length ds at triangle changes and
// accumulates per-triangle lengths.  Bisection localizes each crossing to
// 1e-10 chart units.
void accumulate_segment(const Tiling& tiling, const MetricField& metric, const Vec2& p0,
                        const Vec2& p1, double ds, std::vector<double>& acc, int depth_guard) {
  const auto point_at = [&](double t) { return p0 + t * (p1 - p0); };
  const auto riem_len = [&](double t0, double t1) {
    const Vec2 a = point_at(t0), b = point_at(t1);
    return metric.conformal_factor(0.5 * (a + b)) * (b - a).norm();
  };
  const double chord = (p1 - p0).norm();
  if (chord == 0.0) return;

  int tri0;
  try {
    tri0 = locate(tiling, point_at(0.5)).triangle;
  } catch (const Error&) {
    throw Error(ErrorCode::PathLeavesTiling, "integrate_along: path sample outside the tiling");
  }
  const bool p0_in = tiling.triangle_contains(tri0, p0, kSkeletonTol);
  const bool p1_in = tiling.triangle_contains(tri0, p1, kSkeletonTol);
  if (p0_in && p1_in) {
    acc[tri0] += ds;
    return;
  }
  if (depth_guard <= 0) {  // give up splitting; charge the midpoint triangle
    acc[tri0] += ds;
    return;
  }
  // One endpoint is in a different triangle: bisect the containment predicate
  // (equivalently the crossed edge's sign function) for the crossing point.
  double lo, hi;
  if (!p0_in) {
    lo = 0.0;
    hi = 0.5;
  } else {
    lo = 0.5;
    hi = 1.0;
  }
  // Ensure predicate differs at the ends of [lo, hi]; containment holds at the
  // midpoint side.
  // A loose containment tolerance biases the crossing point off the true edge
  // by tol/|edge|, so the bisection uses a much tighter one than the locator.
  const double cross_tol = 1e-14;
  const double tol_t = 1e-13 / chord;
  double a = lo, b = hi;
  const bool inside_at_b = tiling.triangle_contains(tri0, point_at(b), cross_tol);
  while (b - a > tol_t) {
    const double mid = 0.5 * (a + b);
    if (tiling.triangle_contains(tri0, point_at(mid), cross_tol) == inside_at_b)
      b = mid;
    else
      a = mid;
  }
  const double tc = 0.5 * (a + b);
  const double l0 = riem_len(0.0, tc);
  const double l1 = riem_len(tc, 1.0);
  const double scale = ds / std::max(l0 + l1, 1e-300);
  accumulate_segment(tiling, metric, p0, point_at(tc), l0 * scale, acc, depth_guard - 1);
  accumulate_segment(tiling, metric, point_at(tc), p1, l1 * scale, acc, depth_guard - 1);
}

}  // namespace

std::vector<double> segment_lengths(const PiecewiseConstantFunction& f, const MetricField& metric,
                                    const GeodesicPath& path) {
  const Tiling& tiling = *f.tiling;
  std::vector<double> acc(tiling.triangle_count(), 0.0);
  if (path.status != GeodesicPath::Status::Complete)
    throw Error(ErrorCode::BadInput, "segment_lengths: path is not complete");
  for (std::size_t i = 0; i + 1 < path.samples.size(); ++i) {
    const auto& a = path.samples[i];
    const auto& b = path.samples[i + 1];
    accumulate_segment(tiling, metric, a.x, b.x, b.s - a.s, acc, 24);
  }
  return acc;
}

double integrate_along(const PiecewiseConstantFunction& f, const MetricField& metric,
                       const GeodesicPath& path) {
  const std::vector<double> lens = segment_lengths(f, metric, path);
  double sum = 0.0;
  for (std::size_t i = 0; i < lens.size(); ++i) sum += lens[i] * f.values[i];
  return sum;
}

namespace {

double min_vertex_distance(const Tiling& tiling, const GeodesicPath& path) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& smp : path.samples)
    for (const Vec2& v : tiling.vertices()) best = std::min(best, (smp.x - v).norm());
  return best;
}

double min_phi(const GeodesicPath& path) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& smp : path.samples) best = std::min(best, smp.x.squaredNorm());
  return best;
}

}  // namespace

RayTable build_ray_table(const Tiling& tiling, const MetricField& metric, const Domain& domain,
                         const std::vector<std::pair<double, double>>& s_theta, double step) {
  const BoundaryParam bp(domain, metric);
  PiecewiseConstantFunction dummy{std::make_shared<Tiling>(tiling), {}};
  RayTable table;
  for (const auto& [s, theta] : s_theta) {
    Ray ray;
    ray.s = s;
    ray.theta = theta;
    try {
      ray.path = trace_geodesic(metric, domain, bp.point(s), bp.inward_direction(s, theta), step);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Trapped) {
        ++table.dropped;
        continue;
      }
      throw;
    }
    if (min_vertex_distance(tiling, ray.path) < 1e-7) {
      const double theta2 = theta + 1e-6;
      try {
        ray.path = trace_geodesic(metric, domain, bp.point(s), bp.inward_direction(s, theta2), step);
        ray.theta = theta2;
        ray.flagged = true;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Trapped) {
          ++table.dropped;
          continue;
        }
        throw;
      }
    }
    dummy.values.assign(tiling.triangle_count(), 0.0);
    ray.lengths = segment_lengths(
        PiecewiseConstantFunction{dummy.tiling, dummy.values}, metric, ray.path);
    ray.min_phi = min_phi(ray.path);
    table.rays.push_back(std::move(ray));
  }
  return table;
}

RayTable build_ray_table_grid(const Tiling& tiling, const MetricField& metric, const Domain& domain,
                              int n_s, int n_theta, double step) {
  if (n_s < 1 || n_theta < 1)
    throw Error(ErrorCode::BadInput, "make_sinogram: grid sizes must be >= 1");
  const BoundaryParam bp(domain, metric);
  std::vector<std::pair<double, double>> grid;
  grid.reserve(static_cast<std::size_t>(n_s) * n_theta);
  for (int i = 0; i < n_s; ++i)
    for (int j = 0; j < n_theta; ++j)
      grid.emplace_back(bp.total_length() * (i + 0.5) / n_s, M_PI * (j + 0.5) / n_theta);
  return build_ray_table(tiling, metric, domain, grid, step);
}

Sinogram make_sinogram(const PiecewiseConstantFunction& f, const RayTable& table) {
  Sinogram sino;
  sino.dropped = table.dropped;
  sino.rows.reserve(table.rays.size());
  for (const auto& ray : table.rays) {
    SinogramRow row;
    row.s = ray.s;
    row.theta = ray.theta;
    row.L = ray.path.total_length;
    row.flagged = ray.flagged;
    double I = 0.0;
    for (std::size_t k = 0; k < ray.lengths.size(); ++k) I += ray.lengths[k] * f.values[k];
    row.I = I;
    sino.rows.push_back(row);
  }
  return sino;
}

Sinogram make_sinogram(const PiecewiseConstantFunction& f, const MetricField& metric,
                       const Domain& domain, int n_s, int n_theta, double step) {
  return make_sinogram(f, build_ray_table_grid(*f.tiling, metric, domain, n_s, n_theta, step));
}

GeodesicPath gamma_vh(const MetricField& metric, const Domain& domain, const Vec2& x, const Vec2& v,
                      double h, double step, double max_endpoint_distance) {
  if (!(h > 0.0)) throw Error(ErrorCode::BadInput, "gamma_vh: h must be positive");
  if (std::abs(domain.boundary_function(x)) > 1e-9)
    throw Error(ErrorCode::NotOnBoundary, "gamma_vh: base point not on the boundary");

  // Riemannian-unit w orthogonal to v, oriented along the boundary tangent.
  const Vec2 g = domain.boundary_gradient(x);
  Vec2 w_chart = perp(v).normalized();
  const Vec2 tangent = perp(g);
  if (w_chart.dot(tangent) < 0.0) w_chart = -w_chart;

  // Walk h along the geodesic through (x, v), transporting w alongside.
  GeodesicPath stem;
  {
    stem.samples.push_back({x, v / metric.riemannian_norm(x, v), 0.0});
    const double fine = std::min(step, h / 8.0) / 4.0;
    const int n = std::max(8, static_cast<int>(std::ceil(h / std::min(step, h / 8.0))));
    for (int i = 1; i <= n; ++i) {
      const auto [q, qv] = flow_geodesic(metric, x, v, h * i / n, fine);
      stem.samples.push_back({q, qv, h * i / n});
    }
    stem.total_length = h;
    stem.entry_point = x;
    stem.exit_point = stem.samples.back().x;
  }
  const Vec2 w0 = w_chart / metric.riemannian_norm(x, w_chart);
  const Vec2 wh = parallel_transport(metric, stem, w0, h);
  const Vec2 base = stem.exit_point;

  GeodesicPath path = trace_geodesic(metric, domain, base, wh, step);
  const double d = std::max((path.entry_point - x).norm(), (path.exit_point - x).norm());
  if (d > max_endpoint_distance)
    throw Error(ErrorCode::NotShort, "gamma_vh: endpoints left the requested neighborhood");
  return path;
}

}  // namespace pcx
