#pragma once

#include "pcxray/geometry.hpp"
#include "pcxray/tiling.hpp"
#include "pcxray/transform.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pcx {

struct SceneBundle {
  MetricField metric;
  Domain domain;
  FoliationFunction foliation;
  std::optional<std::string> tiling_path;
  std::optional<std::string> values_path;
};

SceneBundle load_scene(const std::string& path);

std::shared_ptr<Tiling> load_tiling(const std::string& path, const Domain& domain);

std::vector<double> load_values(const std::string& path);
void save_values(const std::string& path, const std::vector<double>& values);

void save_sinogram_csv(const std::string& path, const Sinogram& sino);
Sinogram load_sinogram_csv(const std::string& path);

struct ConeDemoInput {
  std::vector<double> alphas;
  std::vector<double> values;
  double h = 1.0;
  std::optional<double> halfwidth;
};

ConeDemoInput load_cone_spec(const std::string& path);

}  // namespace pcx
