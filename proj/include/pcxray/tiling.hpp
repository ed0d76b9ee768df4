#pragma once

#include "pcxray/geometry.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcx {

enum class EdgeKind { Straight, Arc };

struct Triangle {
  std::array<int, 3> v{};            // vertex indices, positively oriented
  std::array<EdgeKind, 3> edges{};   // edge k joins v[k] -> v[(k+1)%3]
};

constexpr double kSkeletonTol = 1e-10;

/// Triangulation of the domain: chart-straight interior edges, boundary edges
/// are arcs of the domain boundary (each subtending less than pi).
class Tiling {
 public:
  Tiling(std::vector<Vec2> vertices, std::vector<Triangle> triangles, Domain domain);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Domain& domain() const { return domain_; }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }

  /// Incident triangles per undirected edge (vertex-index pair, lo < hi).
  const std::map<std::pair<int, int>, std::vector<int>>& adjacency() const { return adjacency_; }

  bool triangle_contains(int tri, const Vec2& x, double tol = kSkeletonTol) const;

  /// Distance from x to the skeleton of triangle `tri` (its edges and
  /// vertices), chart units.
  double skeleton_distance(int tri, const Vec2& x) const;

  /// Chart angle (from the boundary parameterization) of a boundary vertex.
  double boundary_angle(int vertex) const;

  /// Chart Lebesgue area of a triangle (arc edges polyline-resolved).
  double triangle_area(int tri) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  Domain domain_;
  std::map<std::pair<int, int>, std::vector<int>> adjacency_;
};

struct LocateResult {
  int triangle = -1;       // containing triangle, or a triangle incident to the skeleton point
  bool on_skeleton = false;
};

LocateResult locate(const Tiling& tiling, const Vec2& x);

int depth(const Tiling& tiling, const Vec2& x, double tol = kSkeletonTol);

struct PiecewiseConstantFunction {
  std::shared_ptr<const Tiling> tiling;
  std::vector<double> values;  // one per triangle; the skeleton carries 0
};

struct Sector {
  double start = 0.0;  // chart angles at the base point; conformal metrics
  double end = 0.0;    // preserve angles, so these are Riemannian angles too
  double value = 0.0;
};

struct TangentFan {
  Vec2 base = Vec2::Zero();
  std::vector<Sector> sectors;  // CCW from start to end, width in (0, 2*pi]
};

TangentFan tangent_fan(const PiecewiseConstantFunction& f, const MetricField& metric, const Vec2& x);

struct TilingReport {
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

TilingReport validate_tiling(const Tiling& tiling, const Domain& domain, int samples,
                             std::uint64_t seed);

}  // namespace pcx
