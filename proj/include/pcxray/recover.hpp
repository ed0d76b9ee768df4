#pragma once

#include "pcxray/conemodel.hpp"
#include "pcxray/geometry.hpp"
#include "pcxray/tiling.hpp"
#include "pcxray/transform.hpp"

#include <cstdint>
#include <vector>

namespace pcx {

struct CornerProbeResult {
  std::vector<double> h_sequence;        // strictly decreasing toward 0
  std::vector<double> scaled_integrals;  // (1/h) * integral over gamma_v^h
  double extrapolated_limit = 0.0;       // Richardson, first-order error model
  double tangent_value = 0.0;            // integral of T_x f over sigma_v^1
};

/// Integral of the tangent function over the line sigma_v^1 in the tangent
/// plane at the fan base (offset 1 along v, direction orthogonal to v),
/// lengths in the Riemannian metric at the base.  v is a chart direction.
double tangent_sector_integral(const TangentFan& fan, const Vec2& v, const MetricField& metric);

CornerProbeResult corner_limit(const PiecewiseConstantFunction& f, const MetricField& metric,
                               const Domain& domain, const Vec2& x, const Vec2& v,
                               const std::vector<double>& hs, double step = kDefaultStep);

/// Simplex type at a hypersurface point, per the local uniqueness argument:
/// 1 = cone reaches the far side, 2 = cone touches the tangent line,
/// 3 = cone strictly on the near side.
std::vector<int> classify_simplex_types(const TangentFan& fan, double sigma_tangent_angle);

struct LayerSchedule {
  std::vector<double> levels;           // distinct values of max_triangle phi, descending
  std::vector<std::vector<int>> groups; // triangle indices per level
};

LayerSchedule layer_schedule(const FoliationFunction& phi, const Tiling& tiling);

struct LayerDiagnostics {
  double level = 0.0;
  std::vector<int> group;
  int ray_count = 0;
  double condition = 0.0;
  double residual = 0.0;
};

struct ReconstructionOptions {
  int min_rays_per_triangle = 3;
  double min_length_per_triangle = 1e-3;
  double step = kDefaultStep;
  int convexity_trials = 32;
  std::uint64_t seed = 1;
};

struct Reconstruction {
  std::vector<double> values;
  std::vector<LayerDiagnostics> layers;
  double residual_norm = 0.0;
};

/// Layer stripping along the foliation: per level, solve from rays confined to
/// the already-processed region and subtract solved contributions.
Reconstruction layer_strip_reconstruct(const Sinogram& sino, const Tiling& tiling,
                                       const MetricField& metric, const Domain& domain,
                                       const FoliationFunction& phi,
                                       const ReconstructionOptions& opts = {});

Reconstruction layer_strip_reconstruct(const RayTable& table, const std::vector<double>& measured,
                                       const Tiling& tiling, const MetricField& metric,
                                       const Domain& domain, const FoliationFunction& phi,
                                       const ReconstructionOptions& opts = {});

/// Single least-squares solve over the full ray-length matrix.
Reconstruction global_lsq_reconstruct(const Sinogram& sino, const Tiling& tiling,
                                      const MetricField& metric, const Domain& domain,
                                      const ReconstructionOptions& opts = {});

Reconstruction global_lsq_reconstruct(const RayTable& table, const std::vector<double>& measured);

struct InjectivityReport {
  int trials = 0;
  double max_error = 0.0;          // worst componentwise error over all trials
  double zero_data_residual = 0.0; // max |value| reconstructed from zero data
  double max_method_disagreement = 0.0;
  bool pass = false;
};

InjectivityReport verify_injectivity(const Tiling& tiling, const MetricField& metric,
                                     const Domain& domain, int trials, std::uint64_t seed,
                                     int n_s = 64, int n_theta = 32,
                                     const ReconstructionOptions& opts = {});

}  // namespace pcx
