#pragma once

#include "pcxray/geometry.hpp"
#include "pcxray/tiling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pcx {

/// Deterministic SVG rendering: domain boundary, triangles colored by value,
/// optional geodesic polylines.  Fixed 800x800 viewport.
std::string render_svg(const Domain& domain, const Tiling& tiling,
                       const std::vector<double>& values,
                       const std::vector<GeodesicPath>& overlays = {});

}  // namespace pcx
