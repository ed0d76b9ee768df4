#pragma once

#include "pcxray/geometry.hpp"
#include "pcxray/tiling.hpp"

#include <vector>

namespace pcx {

struct SinogramRow {
  double s = 0.0;      // Riemannian boundary arclength of the entry point
  double theta = 0.0;  // inward angle from the boundary tangent, (0, pi)
  double I = 0.0;      // measured integral
  double L = 0.0;      // Riemannian path length
  bool flagged = false;  // perturbed away from a tiling vertex
};

struct Sinogram {
  std::vector<SinogramRow> rows;
  int dropped = 0;  // trapped rays removed from the grid
};

/// Riemannian arclength parameterization of the domain boundary.
class BoundaryParam {
 public:
  BoundaryParam(const Domain& domain, const MetricField& metric, int resolution = 4096);

  double total_length() const { return total_; }
  Vec2 point(double s) const;
  /// Euclidean-unit chart tangent and inward normal at arclength s.  Chart
  /// angles equal Riemannian angles for conformal metrics.
  void frame(double s, Vec2* x, Vec2* tangent, Vec2* inward_normal) const;
  /// Chart direction entering the domain at Riemannian angle theta from the
  /// boundary tangent.
  Vec2 inward_direction(double s, double theta) const;

 private:
  Domain domain_;
  MetricField metric_;
  std::vector<double> t_grid_;   // chart parameter angles
  std::vector<double> s_grid_;   // cumulative Riemannian arclength
  double total_ = 0.0;
  double param_of_arclength(double s) const;
};

/// Riemannian length of the path inside each triangle; edge crossings refined
/// by bisection to 1e-10 chart units.
std::vector<double> segment_lengths(const PiecewiseConstantFunction& f, const MetricField& metric,
                                    const GeodesicPath& path);

double integrate_along(const PiecewiseConstantFunction& f, const MetricField& metric,
                       const GeodesicPath& path);

/// Precomputed ray bundle shared by the forward transform and reconstruction.
struct Ray {
  double s = 0.0;
  double theta = 0.0;
  GeodesicPath path;
  std::vector<double> lengths;  // per-triangle Riemannian lengths
  double min_phi = 0.0;         // min over path samples of |x|^2
  bool flagged = false;
};

struct RayTable {
  std::vector<Ray> rays;
  int dropped = 0;
};

RayTable build_ray_table(const Tiling& tiling, const MetricField& metric, const Domain& domain,
                         const std::vector<std::pair<double, double>>& s_theta,
                         double step = kDefaultStep);

/// Uniform fan-beam grid; rays grazing a tiling vertex are perturbed in theta
/// by 1e-6 and flagged, trapped rays are dropped.
RayTable build_ray_table_grid(const Tiling& tiling, const MetricField& metric, const Domain& domain,
                              int n_s, int n_theta, double step = kDefaultStep);

Sinogram make_sinogram(const PiecewiseConstantFunction& f, const RayTable& table);

Sinogram make_sinogram(const PiecewiseConstantFunction& f, const MetricField& metric,
                       const Domain& domain, int n_s, int n_theta, double step = kDefaultStep);

/// The corner-probe geodesic: walk distance h inward along (x, v), parallel
/// transport the orthogonal unit vector w, then take the maximal geodesic in
/// direction w(h).  w is oriented with positive component along the boundary
/// tangent at x.
GeodesicPath gamma_vh(const MetricField& metric, const Domain& domain, const Vec2& x, const Vec2& v,
                      double h, double step = kDefaultStep,
                      double max_endpoint_distance = std::numeric_limits<double>::infinity());

}  // namespace pcx
