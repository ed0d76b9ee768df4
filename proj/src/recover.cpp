#include "pcxray/recover.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace pcx {

namespace {

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

double tangent_sector_integral(const TangentFan& fan, const Vec2& v, const MetricField& metric) {
  (void)metric;  // orthonormal-frame computation; conformal metrics preserve angles
  const double theta_v = std::atan2(v.y(), v.x());
  double sum = 0.0;
  for (const Sector& sec : fan.sectors) {
    if (sec.value == 0.0) continue;
    if (sec.end - sec.start >= 2.0 * M_PI - 1e-12) {
      throw Error(ErrorCode::TangentialSector,
                  "tangent_sector_integral: full-circle sector cannot be chorded");
    }
    const double phi0 = wrap_pi(sec.start - theta_v);
    const double phi1 = wrap_pi(sec.end - theta_v);
    for (double phi : {phi0, phi1})
      if (std::abs(std::cos(phi)) < 1e-12)
        throw Error(ErrorCode::TangentialSector,
                    "tangent_sector_integral: sector edge parallel to the probe line");
    if (std::abs(phi0) >= M_PI / 2.0 || std::abs(phi1) >= M_PI / 2.0)
      throw Error(ErrorCode::TangentialSector,
                  "tangent_sector_integral: sector not strictly inward of the probe line");
    sum += sec.value * std::abs(std::tan(phi1) - std::tan(phi0));
  }
  return sum;
}

CornerProbeResult corner_limit(const PiecewiseConstantFunction& f, const MetricField& metric,
                               const Domain& domain, const Vec2& x, const Vec2& v,
                               const std::vector<double>& hs, double step) {
  if (hs.size() < 2) throw Error(ErrorCode::BadInput, "corner_limit: need at least two h values");
  for (std::size_t i = 0; i + 1 < hs.size(); ++i)
    if (!(hs[i] > hs[i + 1] && hs[i + 1] > 0.0))
      throw Error(ErrorCode::BadInput, "corner_limit: h sequence must decrease toward 0");
  if (second_fundamental_form(domain, metric, x) <= 0.0)
    throw Error(ErrorCode::ConvexityCheckFailed, "corner_limit: boundary not strictly convex at x");

  CornerProbeResult result;
  result.h_sequence = hs;
  for (double h : hs) {
    const GeodesicPath path = gamma_vh(metric, domain, x, v, h, step);
    result.scaled_integrals.push_back(integrate_along(f, metric, path) / h);
  }
  // Richardson with a first-order error model on the last two probes.
  const std::size_t n = hs.size();
  const double h1 = hs[n - 2], h2 = hs[n - 1];
  const double i1 = result.scaled_integrals[n - 2], i2 = result.scaled_integrals[n - 1];
  result.extrapolated_limit = i2 + (i2 - i1) * h2 / (h1 - h2);

  const TangentFan fan = tangent_fan(f, metric, x);
  result.tangent_value = tangent_sector_integral(fan, v, metric);
  return result;
}

std::vector<int> classify_simplex_types(const TangentFan& fan, double sigma_tangent_angle) {
  // Inward normal of the hypersurface: 90 degrees counterclockwise from its
  // tangent; H_+ is the open half plane around it.
  const double nu = sigma_tangent_angle + M_PI / 2.0;
  const double tol = 1e-12;
  std::vector<int> types;
  types.reserve(fan.sectors.size());
  for (const Sector& sec : fan.sectors) {
    const double width = sec.end - sec.start;
    if (width <= tol) throw Error(ErrorCode::DegenerateCone, "classify_simplex_types: empty sector");
    if (width >= 2.0 * M_PI - tol) {
      types.push_back(1);  // full circle necessarily reaches H_-
      continue;
    }
    // Angles of the sector relative to nu; the sector is [a, a+width] CCW.
    // H_- is the open arc (pi/2, 3pi/2) of relative angles, H_0 the two
    // tangent directions +-pi/2.
    const double a = wrap_pi(sec.start - nu);
    bool reaches_minus = false;
    bool touches_zero = false;
    for (double rel : {a, a + width}) {
      const double c = std::cos(rel);
      if (c < -tol) reaches_minus = true;
      if (std::abs(c) <= tol) touches_zero = true;
    }
    for (double h0 : {M_PI / 2.0, 3.0 * M_PI / 2.0}) {
      double m = h0 - a;
      m -= 2.0 * M_PI * std::floor(m / (2.0 * M_PI));
      if (m > tol && m < width - tol) reaches_minus = true;  // crosses H_0 into H_-
      if (m <= tol || std::abs(m - width) <= tol) touches_zero = true;
    }
    if (reaches_minus)
      types.push_back(1);
    else if (touches_zero)
      types.push_back(2);
    else
      types.push_back(3);
  }
  return types;
}

LayerSchedule layer_schedule(const FoliationFunction& phi, const Tiling& tiling) {
  const int nt = tiling.triangle_count();
  std::vector<double> maxima(nt, -std::numeric_limits<double>::infinity());
  for (int t = 0; t < nt; ++t) {
    const Triangle& tr = tiling.triangles()[t];
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      const Vec2& a = tiling.vertices()[tr.v[k]];
      const Vec2& b = tiling.vertices()[tr.v[(k + 1) % 3]];
      m = std::max(m, phi.value(a));
      const int ns = 64;
      if (tr.edges[k] == EdgeKind::Straight) {
        for (int i = 1; i < ns; ++i) m = std::max(m, phi.value(a + (b - a) * (double(i) / ns)));
      } else {
        const Domain& dom = tiling.domain();
        const auto bparam = [&](const Vec2& p) {
          if (dom.kind == Domain::Kind::Ellipse) return std::atan2(p.y() / dom.b, p.x() / dom.a);
          return std::atan2(p.y(), p.x());
        };
        const double tu = bparam(a);
        const double dt = wrap_pi(bparam(b) - tu);
        for (int i = 1; i < ns; ++i) m = std::max(m, phi.value(dom.boundary_point(tu + dt * i / ns)));
      }
    }
    maxima[t] = m;
  }
  std::vector<int> order(nt);
  for (int t = 0; t < nt; ++t) order[t] = t;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return maxima[a] > maxima[b]; });

  LayerSchedule schedule;
  for (int t : order) {
    if (schedule.levels.empty() || schedule.levels.back() - maxima[t] > 1e-9) {
      schedule.levels.push_back(maxima[t]);
      schedule.groups.emplace_back();
    }
    schedule.groups.back().push_back(t);
  }
  for (auto& g : schedule.groups) std::sort(g.begin(), g.end());
  return schedule;
}

namespace {

struct LevelSolve {
  Eigen::VectorXd values;
  double condition = 0.0;
  double residual = 0.0;
};

LevelSolve solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  LevelSolve out;
  out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                          : std::numeric_limits<double>::infinity();
  out.values = svd.solve(b);
  out.residual = (A * out.values - b).norm();
  return out;
}

std::vector<double> sinogram_values(const Sinogram& sino) {
  std::vector<double> v;
  v.reserve(sino.rows.size());
  for (const auto& row : sino.rows) v.push_back(row.I);
  return v;
}

RayTable table_from_sinogram(const Sinogram& sino, const Tiling& tiling, const MetricField& metric,
                             const Domain& domain, double step) {
  std::vector<std::pair<double, double>> st;
  st.reserve(sino.rows.size());
  for (const auto& row : sino.rows) st.emplace_back(row.s, row.theta);
  RayTable table = build_ray_table(tiling, metric, domain, st, step);
  if (table.rays.size() != sino.rows.size())
    throw Error(ErrorCode::BadInput, "reconstruct: sinogram rays do not all reach the boundary");
  return table;
}

}  // namespace

Reconstruction layer_strip_reconstruct(const RayTable& table, const std::vector<double>& measured,
                                       const Tiling& tiling, const MetricField& metric,
                                       const Domain& domain, const FoliationFunction& phi,
                                       const ReconstructionOptions& opts) {
  const ConvexityReport conv =
      check_strictly_convex(metric, domain, phi, opts.convexity_trials, opts.seed);
  if (!conv.pass)
    throw Error(ErrorCode::ConvexityCheckFailed, "layer_strip_reconstruct: foliation not strictly convex");

  const int nt = tiling.triangle_count();
  const LayerSchedule schedule = layer_schedule(phi, tiling);
  Reconstruction rec;
  rec.values.assign(nt, 0.0);
  std::vector<bool> solved(nt, false);

  for (std::size_t level = 0; level < schedule.levels.size(); ++level) {
    const std::vector<int>& group = schedule.groups[level];
    const double threshold = (level + 1 < schedule.levels.size())
                                 ? schedule.levels[level + 1]
                                 : -std::numeric_limits<double>::infinity();
    std::vector<int> selected;
    for (std::size_t r = 0; r < table.rays.size(); ++r)
      if (table.rays[r].min_phi > threshold) selected.push_back(static_cast<int>(r));

    // Coverage: each unknown must be hit often and long enough.
    for (int t : group) {
      int hits = 0;
      double total = 0.0;
      for (int r : selected) {
        const double len = table.rays[r].lengths[t];
        if (len > 0.0) {
          ++hits;
          total += len;
        }
      }
      if (hits < opts.min_rays_per_triangle || total < opts.min_length_per_triangle)
        throw Error(ErrorCode::UnderdeterminedLayer,
                    "layer_strip_reconstruct: triangle " + std::to_string(t) + " at level " +
                        std::to_string(level + 1) + " has insufficient ray coverage");
    }

    Eigen::MatrixXd A(selected.size(), group.size());
    Eigen::VectorXd b(selected.size());
    for (std::size_t ri = 0; ri < selected.size(); ++ri) {
      const Ray& ray = table.rays[selected[ri]];
      double residual = measured[selected[ri]];
      for (int t = 0; t < nt; ++t)
        if (solved[t]) residual -= ray.lengths[t] * rec.values[t];
      b(ri) = residual;
      for (std::size_t ci = 0; ci < group.size(); ++ci) A(ri, ci) = ray.lengths[group[ci]];
    }
    const LevelSolve sol = solve_least_squares(A, b);
    for (std::size_t ci = 0; ci < group.size(); ++ci) rec.values[group[ci]] = sol.values(ci);
    for (int t : group) solved[t] = true;

    LayerDiagnostics diag;
    diag.level = schedule.levels[level];
    diag.group = group;
    diag.ray_count = static_cast<int>(selected.size());
    diag.condition = sol.condition;
    diag.residual = sol.residual;
    rec.layers.push_back(std::move(diag));
  }

  double res2 = 0.0;
  for (std::size_t r = 0; r < table.rays.size(); ++r) {
    double pred = 0.0;
    for (int t = 0; t < nt; ++t) pred += table.rays[r].lengths[t] * rec.values[t];
    res2 += (pred - measured[r]) * (pred - measured[r]);
  }
  rec.residual_norm = std::sqrt(res2);
  return rec;
}

Reconstruction layer_strip_reconstruct(const Sinogram& sino, const Tiling& tiling,
                                       const MetricField& metric, const Domain& domain,
                                       const FoliationFunction& phi,
                                       const ReconstructionOptions& opts) {
  const RayTable table = table_from_sinogram(sino, tiling, metric, domain, opts.step);
  return layer_strip_reconstruct(table, sinogram_values(sino), tiling, metric, domain, phi, opts);
}

Reconstruction global_lsq_reconstruct(const RayTable& table, const std::vector<double>& measured) {
  if (table.rays.empty()) throw Error(ErrorCode::BadInput, "global_lsq_reconstruct: no rays");
  const int nt = static_cast<int>(table.rays.front().lengths.size());
  Eigen::MatrixXd A(table.rays.size(), nt);
  Eigen::VectorXd b(table.rays.size());
  for (std::size_t r = 0; r < table.rays.size(); ++r) {
    for (int t = 0; t < nt; ++t) A(r, t) = table.rays[r].lengths[t];
    b(r) = measured[r];
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0))
    throw Error(ErrorCode::RankDeficient, "global_lsq_reconstruct: ray-length matrix is rank deficient");
  const Eigen::VectorXd x = svd.solve(b);
  Reconstruction rec;
  rec.values.assign(x.data(), x.data() + nt);
  rec.residual_norm = (A * x - b).norm();
  return rec;
}

Reconstruction global_lsq_reconstruct(const Sinogram& sino, const Tiling& tiling,
                                      const MetricField& metric, const Domain& domain,
                                      const ReconstructionOptions& opts) {
  const RayTable table = table_from_sinogram(sino, tiling, metric, domain, opts.step);
  return global_lsq_reconstruct(table, sinogram_values(sino));
}

InjectivityReport verify_injectivity(const Tiling& tiling, const MetricField& metric,
                                     const Domain& domain, int trials, std::uint64_t seed, int n_s,
                                     int n_theta, const ReconstructionOptions& opts) {
  if (trials < 1) throw Error(ErrorCode::BadInput, "verify_injectivity: trials must be >= 1");
  const RayTable table = build_ray_table_grid(tiling, metric, domain, n_s, n_theta, opts.step);
  const FoliationFunction phi;
  const int nt = tiling.triangle_count();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);

  InjectivityReport report;
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> truth(nt);
    for (double& v : truth) v = value(rng);
    std::vector<double> measured(table.rays.size(), 0.0);
    for (std::size_t r = 0; r < table.rays.size(); ++r)
      for (int t = 0; t < nt; ++t) measured[r] += table.rays[r].lengths[t] * truth[t];

    const Reconstruction layer =
        layer_strip_reconstruct(table, measured, tiling, metric, domain, phi, opts);
    const Reconstruction global = global_lsq_reconstruct(table, measured);
    for (int t = 0; t < nt; ++t) {
      report.max_error = std::max(report.max_error, std::abs(layer.values[t] - truth[t]));
      report.max_error = std::max(report.max_error, std::abs(global.values[t] - truth[t]));
      report.max_method_disagreement =
          std::max(report.max_method_disagreement, std::abs(layer.values[t] - global.values[t]));
    }
  }
  {
    const std::vector<double> zero(table.rays.size(), 0.0);
    const Reconstruction layer = layer_strip_reconstruct(table, zero, tiling, metric, domain, phi, opts);
    const Reconstruction global = global_lsq_reconstruct(table, zero);
    for (int t = 0; t < nt; ++t)
      report.zero_data_residual = std::max(
          {report.zero_data_residual, std::abs(layer.values[t]), std::abs(global.values[t])});
  }
  report.pass = report.max_error <= 1e-6 && report.zero_data_residual <= 1e-9;
  return report;
}

}  // namespace pcx
