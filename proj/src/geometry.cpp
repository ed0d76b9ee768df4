#include "pcxray/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pcx {

double MetricField::logfactor(const Vec2& x) const {
  if (kind == Kind::Euclidean) return 0.0;
  const double s = x.squaredNorm();
  if (profile == Profile::Log1R2) return std::log1p(s);
  double p = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) p = p * s + coeffs[k];
  return p;
}

Vec2 MetricField::logfactor_gradient(const Vec2& x) const {
  if (kind == Kind::Euclidean) return Vec2::Zero();
  const double s = x.squaredNorm();
  double dp;
  if (profile == Profile::Log1R2) {
    dp = 1.0 / (1.0 + s);
  } else {
    dp = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) dp = dp * s + static_cast<double>(k) * coeffs[k];
  }
  return 2.0 * dp * x;
}

double MetricField::conformal_factor(const Vec2& x) const { return std::exp(logfactor(x)); }

double MetricField::riemannian_norm(const Vec2& x, const Vec2& v) const {
  return conformal_factor(x) * v.norm();
}

MetricField MetricField::euclidean() { return MetricField{}; }

MetricField MetricField::radial_poly(std::vector<double> coeffs) {
  MetricField m;
  m.kind = Kind::ConformalRadial;
  m.profile = Profile::Poly;
  m.coeffs = std::move(coeffs);
  return m;
}

MetricField MetricField::log_radial() {
  MetricField m;
  m.kind = Kind::ConformalRadial;
  m.profile = Profile::Log1R2;
  return m;
}

double Domain::boundary_function(const Vec2& x) const {
  switch (kind) {
    case Kind::Disk:
      return x.squaredNorm() - a * a;
    case Kind::Ellipse:
      return x.x() * x.x() / (a * a) + x.y() * x.y() / (b * b) - 1.0;
    case Kind::ImplicitPoly: {
      double v = 0.0;
      for (const auto& t : terms) v += t.c * std::pow(x.x(), t.px) * std::pow(x.y(), t.py);
      return v;
    }
  }
  return 0.0;
}

Vec2 Domain::boundary_gradient(const Vec2& x) const {
  switch (kind) {
    case Kind::Disk:
      return 2.0 * x;
    case Kind::Ellipse:
      return Vec2(2.0 * x.x() / (a * a), 2.0 * x.y() / (b * b));
    case Kind::ImplicitPoly: {
      Vec2 g = Vec2::Zero();
      for (const auto& t : terms) {
        if (t.px > 0) g.x() += t.c * t.px * std::pow(x.x(), t.px - 1) * std::pow(x.y(), t.py);
        if (t.py > 0) g.y() += t.c * t.py * std::pow(x.x(), t.px) * std::pow(x.y(), t.py - 1);
      }
      return g;
    }
  }
  return Vec2::Zero();
}

bool Domain::inside(const Vec2& x, double tol) const { return boundary_function(x) <= tol; }

double Domain::chart_diameter() const {
  switch (kind) {
    case Kind::Disk:
      return 2.0 * a;
    case Kind::Ellipse:
      return 2.0 * std::max(a, b);
    case Kind::ImplicitPoly: {
      double d = 0.0;
      for (int i = 0; i < 256; ++i) {
        const Vec2 p = boundary_point(2.0 * M_PI * i / 256.0);
        d = std::max(d, 2.0 * p.norm());
      }
      return d;
    }
  }
  return 0.0;
}

Vec2 Domain::boundary_point(double t) const {
  switch (kind) {
    case Kind::Disk:
      return Vec2(a * std::cos(t), a * std::sin(t));
    case Kind::Ellipse:
      return Vec2(a * std::cos(t), b * std::sin(t));
    case Kind::ImplicitPoly: {
      // Ray cast from the origin; assumes the region is star-shaped about 0.
      const Vec2 u(std::cos(t), std::sin(t));
      double lo = 0.0, hi = 1.0;
      while (boundary_function(hi * u) < 0.0 && hi < 1e6) hi *= 2.0;
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (boundary_function(mid * u) < 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi) * u;
    }
  }
  return Vec2::Zero();
}

Domain Domain::disk(double radius) {
  Domain d;
  d.kind = Kind::Disk;
  d.a = radius;
  return d;
}

Domain Domain::ellipse(double a, double b) {
  Domain d;
  d.kind = Kind::Ellipse;
  d.a = a;
  d.b = b;
  return d;
}

Christoffel christoffel(const MetricField& metric, const Vec2& x) {
  const Vec2 dl = metric.logfactor_gradient(x);
  Christoffel g{};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double v = 0.0;
        if (i == k) v += dl[j];
        if (j == k) v += dl[i];
        if (i == j) v -= dl[k];
        g[k][i][j] = v;
      }
  return g;
}

namespace {

struct State {
  Vec2 x;
  Vec2 v;
};

Vec2 geodesic_accel(const MetricField& metric, const Vec2& x, const Vec2& v) {
  const Vec2 dl = metric.logfactor_gradient(x);
  // k-th component of -Gamma^k_{ij} v^i v^j for the conformal metric:
  // -2 (dl . v) v^k + |v|^2 dl^k
  return -2.0 * dl.dot(v) * v + v.squaredNorm() * dl;
}

State rk4_step(const MetricField& metric, const State& st, double h) {
  const auto f = [&](const State& s) -> State {
    return State{s.v, geodesic_accel(metric, s.x, s.v)};
  };
  const State k1 = f(st);
  const State k2 = f(State{st.x + 0.5 * h * k1.x, st.v + 0.5 * h * k1.v});
  const State k3 = f(State{st.x + 0.5 * h * k2.x, st.v + 0.5 * h * k2.v});
  const State k4 = f(State{st.x + h * k3.x, st.v + h * k3.v});
  State out;
  out.x = st.x + (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  out.v = st.v + (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  return out;
}

void renormalize(const MetricField& metric, State& st) {
  const double sp = metric.riemannian_norm(st.x, st.v);
  st.v /= sp;
}

// Forward trace from a point with b(x0) <= tol to the boundary.  x0 may be on
// the boundary, in which case v0 must point inward.
GeodesicPath trace_forward(const MetricField& metric, const Domain& domain, const Vec2& x0,
                           const Vec2& v0, double step, double max_length) {
  GeodesicPath path;
  State st{x0, v0};
  renormalize(metric, st);
  double s = 0.0;
  path.samples.push_back({st.x, st.v, 0.0});
  while (true) {
    State next = rk4_step(metric, st, step);
    renormalize(metric, next);
    if (domain.boundary_function(next.x) > 0.0) {
      // Localize the exit by bisection on the step fraction.
      double lo = 0.0, hi = 1.0;
      State exit_state = next;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        State trial = rk4_step(metric, st, mid * step);
        renormalize(metric, trial);
        const double bv = domain.boundary_function(trial.x);
        if (std::abs(bv) <= 1e-10) {
          exit_state = trial;
          hi = mid;
          break;
        }
        (bv < 0.0 ? lo : hi) = mid;
        exit_state = trial;
      }
      // Final evaluation at hi guards the |b| <= 1e-10 contract.
      exit_state = rk4_step(metric, st, hi * step);
      renormalize(metric, exit_state);
      s += hi * step;
      path.samples.push_back({exit_state.x, exit_state.v, s});
      path.total_length = s;
      path.entry_point = x0;
      path.exit_point = exit_state.x;
      path.status = GeodesicPath::Status::Complete;
      return path;
    }
    st = next;
    s += step;
    path.samples.push_back({st.x, st.v, s});
    if (s > max_length) {
      path.total_length = s;
      path.entry_point = x0;
      path.exit_point = st.x;
      path.status = GeodesicPath::Status::TrappedGuardHit;
      return path;
    }
  }
}

}  // namespace

std::pair<Vec2, Vec2> flow_geodesic(const MetricField& metric, const Vec2& start,
                                    const Vec2& direction, double length, double step) {
  State st{start, direction};
  renormalize(metric, st);
  double remaining = length;
  while (remaining > step) {
    st = rk4_step(metric, st, step);
    renormalize(metric, st);
    remaining -= step;
  }
  if (remaining > 0.0) {
    st = rk4_step(metric, st, remaining);
    renormalize(metric, st);
  }
  return {st.x, st.v};
}

GeodesicPath trace_geodesic(const MetricField& metric, const Domain& domain, const Vec2& start,
                            const Vec2& direction, double step) {
  const double b0 = domain.boundary_function(start);
  if (b0 > 1e-9) throw Error(ErrorCode::StartOutside, "trace_geodesic: start lies outside the domain");
  if (direction.norm() == 0.0) throw Error(ErrorCode::BadInput, "trace_geodesic: zero direction");
  const double guard = 100.0 * domain.chart_diameter();

  Vec2 entry = start;
  Vec2 entry_v = direction;
  const bool on_boundary = b0 > -1e-9;
  if (on_boundary) {
    if (domain.boundary_gradient(start).dot(direction) >= 0.0)
      throw Error(ErrorCode::BadInput, "trace_geodesic: boundary start must point strictly inward");
  } else {
    // Back-trace to the boundary to obtain the entry point and velocity.
    GeodesicPath back = trace_forward(metric, domain, start, -direction, step, guard);
    if (back.status == GeodesicPath::Status::TrappedGuardHit)
      throw Error(ErrorCode::Trapped, "trace_geodesic: length guard hit (trapped geodesic?)");
    entry = back.exit_point;
    entry_v = -back.samples.back().v;
  }
  GeodesicPath path = trace_forward(metric, domain, entry, entry_v, step, guard);
  if (path.status == GeodesicPath::Status::TrappedGuardHit)
    throw Error(ErrorCode::Trapped, "trace_geodesic: length guard hit (trapped geodesic?)");
  return path;
}

Vec2 parallel_transport(const MetricField& metric, const GeodesicPath& path, const Vec2& w,
                        double distance) {
  if (distance < 0.0 || distance > path.total_length + 1e-12)
    throw Error(ErrorCode::DistanceOutOfRange, "parallel_transport: distance outside [0, length]");
  const double norm0 = metric.riemannian_norm(path.samples.front().x, w);
  Vec2 cur = w;
  for (std::size_t i = 0; i + 1 < path.samples.size(); ++i) {
    const auto& a = path.samples[i];
    const auto& b = path.samples[i + 1];
    const double seg = std::min(b.s, distance) - a.s;
    if (seg <= 0.0) break;
    const double frac = seg / (b.s - a.s);
    // RK4 for w' = -Gamma(x)(v, w) with linear interpolation of (x, v).
    const auto rhs = [&](double u, const Vec2& wv) -> Vec2 {
      const Vec2 x = a.x + u * (b.x - a.x);
      const Vec2 v = a.v + u * (b.v - a.v);
      const Vec2 dl = metric.logfactor_gradient(x);
      // -Gamma^k_{ij} v^i w^j = -(dl.v) w - (dl.w) v + (v.w) dl
      return -dl.dot(v) * wv - dl.dot(wv) * v + v.dot(wv) * dl;
    };
    const double h = seg;
    const Vec2 k1 = rhs(0.0, cur);
    const Vec2 k2 = rhs(0.5 * frac, cur + 0.5 * h * k1);
    const Vec2 k3 = rhs(0.5 * frac, cur + 0.5 * h * k2);
    const Vec2 k4 = rhs(frac, cur + h * k3);
    cur += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // Transport is an isometry; pin the Riemannian norm.
    const Vec2 xe = a.x + frac * (b.x - a.x);
    cur *= norm0 / metric.riemannian_norm(xe, cur);
    if (b.s >= distance) break;
  }
  return cur;
}

Vec2 boundary_normal(const Domain& domain, const MetricField& metric, const Vec2& x) {
  if (std::abs(domain.boundary_function(x)) > 1e-9)
    throw Error(ErrorCode::NotOnBoundary, "boundary_normal: point not on the boundary");
  const Vec2 g = domain.boundary_gradient(x);
  return -g / (metric.conformal_factor(x) * g.norm());
}

double second_fundamental_form(const Domain& domain, const MetricField& metric, const Vec2& x) {
  if (std::abs(domain.boundary_function(x)) > 1e-9)
    throw Error(ErrorCode::NotOnBoundary, "second_fundamental_form: point not on the boundary");
  const Vec2 g = domain.boundary_gradient(x);
  const double gn = g.norm();
  if (gn <= 1e-8) throw Error(ErrorCode::BadInput, "second_fundamental_form: degenerate boundary gradient");
  const Vec2 tangent = perp(g) / (metric.conformal_factor(x) * gn);  // Riemannian unit
  const double delta = 5e-3;
  const auto [pp, vp] = flow_geodesic(metric, x, tangent, delta, delta / 64.0);
  const auto [pm, vm] = flow_geodesic(metric, x, -tangent, delta, delta / 64.0);
  const double d2 =
      (domain.boundary_function(pp) - 2.0 * domain.boundary_function(x) + domain.boundary_function(pm)) /
      (delta * delta);
  return metric.conformal_factor(x) * d2 / gn;
}

ConvexityReport check_strictly_convex(const MetricField& metric, const Domain& domain,
                                      const FoliationFunction& phi, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::BadInput, "check_strictly_convex: trials must be >= 1");
  std::mt19937_64 rng(seed);
  const double R = 0.5 * domain.chart_diameter();
  std::uniform_real_distribution<double> coord(-R, R);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

  ConvexityReport report;
  report.trials = trials;
  report.min_second_derivative = std::numeric_limits<double>::infinity();
  const double step = kDefaultStep;
  for (int trial = 0; trial < trials; ++trial) {
    Vec2 p;
    do {
      p = Vec2(coord(rng), coord(rng));
    } while (!domain.inside(p, -1e-6));
    const double th = angle(rng);
    GeodesicPath path;
    try {
      path = trace_geodesic(metric, domain, p, Vec2(std::cos(th), std::sin(th)), step);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Trapped) {
        ++report.trapped_skipped;
        continue;
      }
      throw;
    }
    // Central second differences of phi along the path on a uniform stride.
    const int m = 8;
    const auto& smp = path.samples;
    for (std::size_t i = m; i + m + 1 < smp.size(); i += m) {
      const double ds = smp[i + m].s - smp[i].s;
      const double ds2 = smp[i].s - smp[i - m].s;
      if (std::abs(ds - ds2) > 1e-12) continue;  // skip the clipped final stride
      const double d2 =
          (phi.value(smp[i + m].x) - 2.0 * phi.value(smp[i].x) + phi.value(smp[i - m].x)) / (ds * ds);
      report.min_second_derivative = std::min(report.min_second_derivative, d2);
    }
  }
  report.pass = report.min_second_derivative > 1e-6;
  return report;
}

}  // namespace pcx
