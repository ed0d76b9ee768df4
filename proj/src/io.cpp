#include "pcxray/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pcx {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, "failed to parse " + path + ": " + e.what());
  }
  return j;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SceneBundle load_scene(const std::string& path) {
  const json j = read_json(path);
  SceneBundle scene;

  const json& jm = j.at("metric");
  const std::string mkind = jm.at("kind").get<std::string>();
  if (mkind == "euclidean") {
    scene.metric = MetricField::euclidean();
  } else if (mkind == "conformal-radial") {
    const std::string profile = jm.value("profile", "poly");
    if (profile == "poly") {
      scene.metric = MetricField::radial_poly(jm.at("coeffs").get<std::vector<double>>());
    } else if (profile == "log1r2") {
      scene.metric = MetricField::log_radial();
    } else {
      throw Error(ErrorCode::BadInput, "unknown metric profile: " + profile);
    }
  } else {
    throw Error(ErrorCode::BadInput, "unknown metric kind: " + mkind);
  }

  const json& jd = j.at("domain");
  const std::string dkind = jd.at("kind").get<std::string>();
  if (dkind == "disk") {
    scene.domain = Domain::disk(jd.at("params").at(0).get<double>());
  } else if (dkind == "ellipse") {
    scene.domain = Domain::ellipse(jd.at("params").at(0).get<double>(), jd.at("params").at(1).get<double>());
  } else if (dkind == "implicit-poly") {
    scene.domain.kind = Domain::Kind::ImplicitPoly;
    for (const auto& term : jd.at("terms"))
      scene.domain.terms.push_back({term.at(0).get<int>(), term.at(1).get<int>(), term.at(2).get<double>()});
  } else {
    throw Error(ErrorCode::BadInput, "unknown domain kind: " + dkind);
  }

  if (j.contains("foliation")) {
    const std::string fkind = j.at("foliation").at("kind").get<std::string>();
    if (fkind != "radial-quadratic")
      throw Error(ErrorCode::BadInput, "unknown foliation kind: " + fkind);
  }
  if (j.contains("tiling")) scene.tiling_path = j.at("tiling").get<std::string>();
  if (j.contains("values")) scene.values_path = j.at("values").get<std::string>();
  return scene;
}

std::shared_ptr<Tiling> load_tiling(const std::string& path, const Domain& domain) {
  const json j = read_json(path);
  std::vector<Vec2> vertices;
  for (const auto& v : j.at("vertices")) vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  std::vector<Triangle> triangles;
  for (const auto& t : j.at("triangles")) {
    Triangle tri;
    for (int k = 0; k < 3; ++k) tri.v[k] = t.at("v").at(k).get<int>();
    for (int k = 0; k < 3; ++k) {
      const std::string kind = t.at("edges").at(k).get<std::string>();
      if (kind == "straight")
        tri.edges[k] = EdgeKind::Straight;
      else if (kind == "arc")
        tri.edges[k] = EdgeKind::Arc;
      else
        throw Error(ErrorCode::BadInput, "unknown edge kind: " + kind);
    }
    triangles.push_back(tri);
  }
  return std::make_shared<Tiling>(std::move(vertices), std::move(triangles), domain);
}

std::vector<double> load_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open file: " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  return values;
}

void save_values(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write file: " + path);
  for (double v : values) out << fmt17(v) << "\n";
}

void save_sinogram_csv(const std::string& path, const Sinogram& sino) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write file: " + path);
  out << "s,theta,I,L,flag\n";
  for (const auto& row : sino.rows)
    out << fmt17(row.s) << "," << fmt17(row.theta) << "," << fmt17(row.I) << "," << fmt17(row.L) << ","
        << (row.flagged ? 1 : 0) << "\n";
}

Sinogram load_sinogram_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open file: " + path);
  Sinogram sino;
  std::string line;
  if (!std::getline(in, line) || line.rfind("s,theta,I,L", 0) != 0)
    throw Error(ErrorCode::BadInput, "sinogram CSV missing header: " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SinogramRow row;
    int flag = 0;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    if (!(ls >> row.s >> row.theta >> row.I >> row.L >> flag))
      throw Error(ErrorCode::BadInput, "malformed sinogram row: " + line);
    row.flagged = flag != 0;
    sino.rows.push_back(row);
  }
  return sino;
}

ConeDemoInput load_cone_spec(const std::string& path) {
  const json j = read_json(path);
  ConeDemoInput input;
  input.alphas = j.at("alphas").get<std::vector<double>>();
  input.values = j.at("values").get<std::vector<double>>();
  input.h = j.value("h", 1.0);
  if (j.contains("halfwidth")) input.halfwidth = j.at("halfwidth").get<double>();
  if (input.alphas.size() != input.values.size() + 1)
    throw Error(ErrorCode::BadInput, "cone spec: need one more slope than values");
  return input;
}

}  // namespace pcx
