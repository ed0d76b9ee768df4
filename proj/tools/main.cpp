#include "pcxray/conemodel.hpp"
#include "pcxray/geometry.hpp"
#include "pcxray/io.hpp"
#include "pcxray/recover.hpp"
#include "pcxray/render.hpp"
#include "pcxray/tiling.hpp"
#include "pcxray/transform.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitUnderdetermined = 4;

struct LoadedScene {
  pcx::SceneBundle bundle;
  std::shared_ptr<pcx::Tiling> tiling;
};

LoadedScene load(const std::string& scene_path, const std::string& tiling_path) {
  LoadedScene s;
  s.bundle = pcx::load_scene(scene_path);
  std::string tp = tiling_path;
  if (tp.empty() && s.bundle.tiling_path) tp = *s.bundle.tiling_path;
  if (tp.empty()) throw pcx::Error(pcx::ErrorCode::BadInput, "no tiling file given");
  s.tiling = pcx::load_tiling(tp, s.bundle.domain);
  return s;
}

std::vector<double> parse_hs(const std::string& list) {
  std::vector<double> hs;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) hs.push_back(std::stod(item));
  return hs;
}

int exit_code_for(const pcx::Error& e) {
  switch (e.code()) {
    case pcx::ErrorCode::UnderdeterminedLayer:
      return kExitUnderdetermined;
    case pcx::ErrorCode::Trapped:
    case pcx::ErrorCode::NotShort:
    case pcx::ErrorCode::ConvexityCheckFailed:
    case pcx::ErrorCode::PathLeavesTiling:
      return kExitGeometry;
    default:
      return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesic X-ray transform of piecewise constant functions"};
  app.require_subcommand(1);

  std::string scene_path, tiling_path, values_path, out_path, sino_path, method = "layer";
  std::string cone_path, hs_list = "0.1,0.05,0.025,0.0125";
  int n_s = 64, n_theta = 32, trials = 10, x_index = -1;
  std::uint64_t seed = 1;
  bool self_check = false;
  double noise = 0.0;

  auto* forward = app.add_subcommand("forward", "Trace rays and write a sinogram CSV");
  forward->add_option("--scene", scene_path)->required();
  forward->add_option("--tiling", tiling_path);
  forward->add_option("--values", values_path);
  forward->add_option("--out", out_path)->required();
  forward->add_option("--ns", n_s);
  forward->add_option("--ntheta", n_theta);
  forward->add_option("--noise", noise, "additive gaussian sigma");
  forward->add_option("--seed", seed);
  forward->add_flag("--self-check", self_check);

  auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct values from a sinogram");
  reconstruct->add_option("--scene", scene_path)->required();
  reconstruct->add_option("--tiling", tiling_path);
  reconstruct->add_option("--sinogram", sino_path)->required();
  reconstruct->add_option("--method", method)->check(CLI::IsMember({"layer", "global"}));
  reconstruct->add_option("--out", out_path)->required();

  auto* cone_demo = app.add_subcommand("cone-demo", "Euclidean cone recovery walkthrough");
  cone_demo->add_option("--input", cone_path)->required();

  auto* limit_check = app.add_subcommand("limit-check", "Corner-limit convergence table");
  limit_check->add_option("--scene", scene_path)->required();
  limit_check->add_option("--tiling", tiling_path);
  limit_check->add_option("--values", values_path);
  limit_check->add_option("--x-index", x_index, "boundary vertex index")->required();
  limit_check->add_option("--hs", hs_list, "comma-separated h sequence");

  auto* render = app.add_subcommand("render", "Render the scene as SVG");
  render->add_option("--scene", scene_path)->required();
  render->add_option("--tiling", tiling_path);
  render->add_option("--values", values_path);
  render->add_option("--sinogram", sino_path);
  render->add_option("--out", out_path)->required();

  auto* verify = app.add_subcommand("verify", "Round-trip injectivity check");
  verify->add_option("--scene", scene_path)->required();
  verify->add_option("--tiling", tiling_path);
  verify->add_option("--trials", trials);
  verify->add_option("--seed", seed);
  verify->add_option("--ns", n_s);
  verify->add_option("--ntheta", n_theta);

  CLI11_PARSE(app, argc, argv);

  try {
    if (forward->parsed()) {
      LoadedScene s = load(scene_path, tiling_path);
      std::string vp = values_path.empty() && s.bundle.values_path ? *s.bundle.values_path : values_path;
      std::vector<double> values =
          vp.empty() ? std::vector<double>(s.tiling->triangle_count(), 0.0) : pcx::load_values(vp);
      if (static_cast<int>(values.size()) != s.tiling->triangle_count())
        throw pcx::Error(pcx::ErrorCode::BadInput, "value count does not match triangle count");
      pcx::PiecewiseConstantFunction f{s.tiling, values};
      pcx::Sinogram sino = pcx::make_sinogram(f, s.bundle.metric, s.bundle.domain, n_s, n_theta);
      if (noise > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g(0.0, noise);
        for (auto& row : sino.rows) row.I += g(rng);
      }
      if (sino.dropped > static_cast<int>(0.01 * n_s * n_theta)) {
        std::cerr << "too many trapped rays: " << sino.dropped << "\n";
        return kExitGeometry;
      }
      if (self_check) {
        double vmax = 0.0;
        for (double v : values) vmax = std::max(vmax, std::abs(v));
        const bool constant =
            std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
        for (const auto& row : sino.rows) {
          if (std::abs(row.I) > vmax * row.L + 1e-8)
            throw pcx::Error(pcx::ErrorCode::BadInput, "self-check: |I| exceeds max|f| * L");
          if (constant && std::abs(row.I - values.front() * row.L) > 1e-8)
            throw pcx::Error(pcx::ErrorCode::BadInput, "self-check: constant-function identity violated");
        }
      }
      pcx::save_sinogram_csv(out_path, sino);
      std::cout << "rays=" << sino.rows.size() << " dropped=" << sino.dropped << "\n";
    } else if (reconstruct->parsed()) {
      LoadedScene s = load(scene_path, tiling_path);
      const pcx::Sinogram sino = pcx::load_sinogram_csv(sino_path);
      pcx::Reconstruction rec;
      if (method == "layer") {
        rec = pcx::layer_strip_reconstruct(sino, *s.tiling, s.bundle.metric, s.bundle.domain,
                                           s.bundle.foliation);
        for (const auto& layer : rec.layers) {
          std::cout << "level=" << layer.level << " group_size=" << layer.group.size()
                    << " rays=" << layer.ray_count << " cond=" << layer.condition
                    << " residual=" << layer.residual << "\n";
        }
      } else {
        rec = pcx::global_lsq_reconstruct(sino, *s.tiling, s.bundle.metric, s.bundle.domain);
      }
      pcx::save_values(out_path, rec.values);
      std::cout << "residual_norm=" << rec.residual_norm << "\n";
    } else if (cone_demo->parsed()) {
      const pcx::ConeDemoInput input = pcx::load_cone_spec(cone_path);
      pcx::ConeSpec cone{input.alphas, input.values};
      const double w = input.halfwidth ? *input.halfwidth : pcx::default_stencil_halfwidth(input.alphas);
      const auto I = [&](double t) { return pcx::cone_line_integral(cone, {input.h, t}); };
      const pcx::ConeRecovery rec = pcx::recover_cone_values(input.alphas, I, input.h, w);
      const Eigen::MatrixXd A = pcx::vandermonde_matrix(input.alphas);

      std::cout << "halfwidth=" << w << "\n";
      std::cout << "t,integral\n";
      for (int i = -2; i <= 2; ++i) {
        const double t = w * i / 2.0;
        std::printf("%.6f,%.12g\n", t, I(t));
      }
      std::cout << "matrix:\n" << A << "\n";
      std::cout << "det_closed_form=" << pcx::vandermonde_det(input.alphas)
                << " det_lu=" << A.partialPivLu().determinant() << " cond=" << rec.condition << "\n";
      std::cout << "coefficients:";
      for (double c : rec.coefficients) std::cout << " " << c;
      std::cout << "\nrecovered:";
      for (double v : rec.values) std::cout << " " << v;
      std::cout << "\ntruth:";
      for (double v : input.values) std::cout << " " << v;
      std::cout << "\n";
    } else if (limit_check->parsed()) {
      LoadedScene s = load(scene_path, tiling_path);
      std::string vp = values_path.empty() && s.bundle.values_path ? *s.bundle.values_path : values_path;
      const std::vector<double> values = pcx::load_values(vp);
      pcx::PiecewiseConstantFunction f{s.tiling, values};
      if (x_index < 0 || x_index >= static_cast<int>(s.tiling->vertices().size()))
        throw pcx::Error(pcx::ErrorCode::BadInput, "x-index out of range");
      const pcx::Vec2 x = s.tiling->vertices()[x_index];
      const pcx::Vec2 v = pcx::boundary_normal(s.bundle.domain, s.bundle.metric, x);
      const pcx::CornerProbeResult res =
          pcx::corner_limit(f, s.bundle.metric, s.bundle.domain, x, v, parse_hs(hs_list));
      std::cout << "h,scaled_integral,error_vs_tangent\n";
      for (std::size_t i = 0; i < res.h_sequence.size(); ++i)
        std::printf("%.6g,%.12g,%.3e\n", res.h_sequence[i], res.scaled_integrals[i],
                    std::abs(res.scaled_integrals[i] - res.tangent_value));
      std::cout << "extrapolated_limit=" << res.extrapolated_limit
                << " tangent_value=" << res.tangent_value << "\n";
    } else if (render->parsed()) {
      LoadedScene s = load(scene_path, tiling_path);
      std::vector<double> values(s.tiling->triangle_count(), 0.0);
      std::string vp = values_path.empty() && s.bundle.values_path ? *s.bundle.values_path : values_path;
      if (!vp.empty()) values = pcx::load_values(vp);
      std::vector<pcx::GeodesicPath> overlays;
      if (!sino_path.empty()) {
        const pcx::Sinogram sino = pcx::load_sinogram_csv(sino_path);
        const pcx::BoundaryParam bp(s.bundle.domain, s.bundle.metric);
        const std::size_t stride = std::max<std::size_t>(1, sino.rows.size() / 32);
        for (std::size_t i = 0; i < sino.rows.size(); i += stride) {
          const auto& row = sino.rows[i];
          overlays.push_back(pcx::trace_geodesic(s.bundle.metric, s.bundle.domain, bp.point(row.s),
                                                 bp.inward_direction(row.s, row.theta)));
        }
      }
      std::ofstream out(out_path);
      out << pcx::render_svg(s.bundle.domain, *s.tiling, values, overlays);
      std::cout << "triangles=" << s.tiling->triangle_count() << " overlays=" << overlays.size() << "\n";
    } else if (verify->parsed()) {
      LoadedScene s = load(scene_path, tiling_path);
      const pcx::InjectivityReport report =
          pcx::verify_injectivity(*s.tiling, s.bundle.metric, s.bundle.domain, trials, seed, n_s, n_theta);
      std::cout << "trials=" << report.trials << " max_error=" << report.max_error
                << " zero_data_residual=" << report.zero_data_residual
                << " method_disagreement=" << report.max_method_disagreement
                << " pass=" << (report.pass ? 1 : 0) << "\n";
      return report.pass ? 0 : 1;
    }
  } catch (const pcx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
