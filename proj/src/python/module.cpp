#include "pcxray/conemodel.hpp"
#include "pcxray/geometry.hpp"
#include "pcxray/io.hpp"
#include "pcxray/recover.hpp"
#include "pcxray/tiling.hpp"
#include "pcxray/transform.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pcx;

namespace {

Sinogram sinogram_from_rows(const std::vector<std::tuple<double, double, double, double, bool>>& rows) {
  Sinogram sino;
  for (const auto& [s, theta, I, L, flag] : rows) sino.rows.push_back({s, theta, I, L, flag});
  return sino;
}

std::vector<std::tuple<double, double, double, double, bool>> rows_of(const Sinogram& sino) {
  std::vector<std::tuple<double, double, double, double, bool>> out;
  out.reserve(sino.rows.size());
  for (const auto& r : sino.rows) out.emplace_back(r.s, r.theta, r.I, r.L, r.flagged);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geodesic X-ray transform of piecewise constant functions";

  py::register_exception<Error>(m, "PcxError");

  py::class_<MetricField>(m, "MetricField")
      .def_static("euclidean", &MetricField::euclidean)
      .def_static("radial_poly", &MetricField::radial_poly, py::arg("coeffs"))
      .def_static("log_radial", &MetricField::log_radial)
      .def("logfactor", &MetricField::logfactor)
      .def("conformal_factor", &MetricField::conformal_factor)
      .def("riemannian_norm", &MetricField::riemannian_norm);

  py::class_<Domain>(m, "Domain")
      .def_static("disk", &Domain::disk, py::arg("radius"))
      .def_static("ellipse", &Domain::ellipse, py::arg("a"), py::arg("b"))
      .def("boundary_function", &Domain::boundary_function)
      .def("inside", &Domain::inside, py::arg("x"), py::arg("tol") = 0.0)
      .def("boundary_point", &Domain::boundary_point)
      .def("chart_diameter", &Domain::chart_diameter);

  py::class_<PathSample>(m, "PathSample")
      .def_readonly("x", &PathSample::x)
      .def_readonly("v", &PathSample::v)
      .def_readonly("s", &PathSample::s);

  py::class_<GeodesicPath>(m, "GeodesicPath")
      .def_readonly("samples", &GeodesicPath::samples)
      .def_readonly("total_length", &GeodesicPath::total_length)
      .def_readonly("entry_point", &GeodesicPath::entry_point)
      .def_readonly("exit_point", &GeodesicPath::exit_point)
      .def_property_readonly("complete", [](const GeodesicPath& p) {
        return p.status == GeodesicPath::Status::Complete;
      });

  py::class_<Tiling, std::shared_ptr<Tiling>>(m, "Tiling")
      .def_property_readonly("triangle_count", &Tiling::triangle_count)
      .def_property_readonly("vertices", &Tiling::vertices)
      .def("triangle_area", &Tiling::triangle_area);

  py::class_<PiecewiseConstantFunction>(m, "PiecewiseConstantFunction")
      .def(py::init([](std::shared_ptr<Tiling> tiling, std::vector<double> values) {
             return PiecewiseConstantFunction{std::move(tiling), std::move(values)};
           }),
           py::arg("tiling"), py::arg("values"))
      .def_readonly("values", &PiecewiseConstantFunction::values);

  m.def("load_tiling", &load_tiling, py::arg("path"), py::arg("domain"));
  m.def("validate_tiling",
        [](const Tiling& t, const Domain& d, int samples, std::uint64_t seed) {
          return validate_tiling(t, d, samples, seed).violations;
        },
        py::arg("tiling"), py::arg("domain"), py::arg("samples") = 1000, py::arg("seed") = 1);

  m.def("trace_geodesic", &trace_geodesic, py::arg("metric"), py::arg("domain"), py::arg("start"),
        py::arg("direction"), py::arg("step") = kDefaultStep);
  m.def("boundary_normal", &boundary_normal);
  m.def("second_fundamental_form", &second_fundamental_form);
  m.def("integrate_along", &integrate_along, py::arg("f"), py::arg("metric"), py::arg("path"));

  m.def("make_sinogram",
        [](const PiecewiseConstantFunction& f, const MetricField& m_, const Domain& d, int ns,
           int ntheta) {
          const Sinogram sino = make_sinogram(f, m_, d, ns, ntheta);
          return py::make_tuple(rows_of(sino), sino.dropped);
        },
        py::arg("f"), py::arg("metric"), py::arg("domain"), py::arg("ns"), py::arg("ntheta"));

  m.def("layer_strip_reconstruct",
        [](const std::vector<std::tuple<double, double, double, double, bool>>& rows,
           const Tiling& tiling, const MetricField& metric, const Domain& domain) {
          const Reconstruction rec = layer_strip_reconstruct(sinogram_from_rows(rows), tiling, metric,
                                                             domain, FoliationFunction{});
          return py::make_tuple(rec.values, rec.residual_norm);
        },
        py::arg("rows"), py::arg("tiling"), py::arg("metric"), py::arg("domain"));
  m.def("global_lsq_reconstruct",
        [](const std::vector<std::tuple<double, double, double, double, bool>>& rows,
           const Tiling& tiling, const MetricField& metric, const Domain& domain) {
          const Reconstruction rec = global_lsq_reconstruct(sinogram_from_rows(rows), tiling, metric,
                                                            domain);
          return py::make_tuple(rec.values, rec.residual_norm);
        },
        py::arg("rows"), py::arg("tiling"), py::arg("metric"), py::arg("domain"));

  m.def("verify_injectivity",
        [](const Tiling& tiling, const MetricField& metric, const Domain& domain, int trials,
           std::uint64_t seed, int ns, int ntheta) {
          const InjectivityReport rep = verify_injectivity(tiling, metric, domain, trials, seed, ns, ntheta);
          py::dict out;
          out["trials"] = rep.trials;
          out["max_error"] = rep.max_error;
          out["zero_data_residual"] = rep.zero_data_residual;
          out["max_method_disagreement"] = rep.max_method_disagreement;
          out["pass"] = rep.pass;
          return out;
        },
        py::arg("tiling"), py::arg("metric"), py::arg("domain"), py::arg("trials") = 5,
        py::arg("seed") = 1, py::arg("ns") = 32, py::arg("ntheta") = 16);

  m.def("cone_line_integral",
        [](const std::vector<double>& alphas, const std::vector<double>& values, double h, double t) {
          return cone_line_integral({alphas, values}, {h, t});
        },
        py::arg("alphas"), py::arg("values"), py::arg("h"), py::arg("t"));
  m.def("vandermonde_matrix", &vandermonde_matrix);
  m.def("vandermonde_det", &vandermonde_det);
  m.def("default_stencil_halfwidth", &default_stencil_halfwidth);
  m.def("recover_cone_values",
        [](const std::vector<double>& alphas, const std::function<double(double)>& integrals, double h,
           double halfwidth) {
          const ConeRecovery rec = recover_cone_values(alphas, integrals, h, halfwidth);
          py::dict out;
          out["values"] = rec.values;
          out["coefficients"] = rec.coefficients;
          out["condition"] = rec.condition;
          out["determinant"] = rec.determinant;
          return out;
        },
        py::arg("alphas"), py::arg("integrals"), py::arg("h"), py::arg("halfwidth"));
}
