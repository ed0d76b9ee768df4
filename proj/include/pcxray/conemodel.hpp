#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace pcx {

/// Conical piecewise constant function on the upper half plane: value a_i on
/// the wedge alpha_i y > x > alpha_{i+1} y, zero elsewhere.
struct ConeSpec {
  std::vector<double> alphas;  // strictly decreasing, size N+1
  std::vector<double> values;  // size N

  int n() const { return static_cast<int>(values.size()); }
};

/// Probe line y = h + t x.
struct LineProbe {
  double h = 1.0;
  double t = 0.0;
};

double cone_line_integral(const ConeSpec& cone, const LineProbe& probe);

Eigen::MatrixXd vandermonde_matrix(const std::vector<double>& alphas);

double vandermonde_det(const std::vector<double>& alphas);

struct ConeRecovery {
  std::vector<double> values;
  std::vector<double> coefficients;  // fitted Taylor coefficients of m(t)
  double condition = 0.0;            // condition number of the Vandermonde system
  double determinant = 0.0;          // closed-form determinant
};

/// Default half-width of the probe stencil for the given slopes.
double default_stencil_halfwidth(const std::vector<double>& alphas);

/// Recovers the wedge values from line integrals t -> I(t).  Normalizes
/// m(t) = I(t) / (h sqrt(1+t^2)), estimates the Taylor coefficients of m at 0
/// by polynomial least squares on Chebyshev nodes in [-halfwidth, halfwidth],
/// and solves the Vandermonde system A a = coefficients.
ConeRecovery recover_cone_values(const std::vector<double>& alphas,
                                 const std::function<double(double)>& integrals, double h,
                                 double stencil_halfwidth);

/// Estimated Taylor coefficients (orders 0..max_order) of a smooth function at
/// 0, by scaled polynomial least squares on Chebyshev nodes in [-w, w].
std::vector<double> fit_taylor_coefficients(const std::function<double(double)>& fn, double w,
                                            int max_order, int fit_degree);

}  // namespace pcx
