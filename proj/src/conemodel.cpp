#include "pcxray/conemodel.hpp"

#include "pcxray/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pcx {

namespace {

void require_descending(const std::vector<double>& alphas) {
  if (alphas.size() < 2)
    throw Error(ErrorCode::BadInput, "cone: need at least two slopes");
  for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i + 1]))
      throw Error(ErrorCode::AlphasNotDescending, "cone: slopes must be strictly decreasing");
}

}  // namespace

double cone_line_integral(const ConeSpec& cone, const LineProbe& probe) {
  require_descending(cone.alphas);
  const int n = cone.n();
  std::vector<double> z(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double den = 1.0 - cone.alphas[i] * probe.t;
    if (den <= 0.0)
      throw Error(ErrorCode::ProbeDegenerate, "cone_line_integral: probe misses a wedge ray");
    z[i] = cone.alphas[i] / den;
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += (z[i] - z[i + 1]) * cone.values[i];
  return probe.h * std::sqrt(1.0 + probe.t * probe.t) * sum;
}

Eigen::MatrixXd vandermonde_matrix(const std::vector<double>& alphas) {
  require_descending(alphas);
  const int n = static_cast<int>(alphas.size()) - 1;
  Eigen::MatrixXd A(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      A(k, i) = std::pow(alphas[i], k + 1) - std::pow(alphas[i + 1], k + 1);
  return A;
}

double vandermonde_det(const std::vector<double>& alphas) {
  const int n = static_cast<int>(alphas.size()) - 1;
  double prod = (n % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = i + 1; j < alphas.size(); ++j) prod *= (alphas[j] - alphas[i]);
  return prod;
}

double default_stencil_halfwidth(const std::vector<double>& alphas) {
  double amax = 0.0;
  for (double a : alphas) amax = std::max(amax, std::abs(a));
  return amax > 0.0 ? std::min(0.05, 0.5 / amax) : 0.05;
}

std::vector<double> fit_taylor_coefficients(const std::function<double(double)>& fn, double w,
                                            int max_order, int fit_degree) {
  fit_degree = std::max(fit_degree, max_order);
  const int nodes = 2 * fit_degree + 1;
  Eigen::VectorXd y(nodes);
  Eigen::MatrixXd V(nodes, fit_degree + 1);
  for (int j = 0; j < nodes; ++j) {
    const double u = std::cos(M_PI * (2.0 * j + 1.0) / (2.0 * nodes));  // Chebyshev in [-1,1]
    y(j) = fn(u * w);
    double p = 1.0;
    for (int k = 0; k <= fit_degree; ++k) {
      V(j, k) = p;
      p *= u;
    }
  }
  const Eigen::VectorXd b = V.colPivHouseholderQr().solve(y);
  std::vector<double> out(max_order + 1);
  double wk = 1.0;
  for (int k = 0; k <= max_order; ++k) {
    out[k] = b(k) / wk;
    wk *= w;
  }
  return out;
}

ConeRecovery recover_cone_values(const std::vector<double>& alphas,
                                 const std::function<double(double)>& integrals, double h,
                                 double stencil_halfwidth) {
  require_descending(alphas);
  const int n = static_cast<int>(alphas.size()) - 1;
  const double w = stencil_halfwidth;
  if (!(w > 0.0)) throw Error(ErrorCode::StencilInvalid, "recover_cone_values: halfwidth must be > 0");
  for (double a : alphas)
    if (1.0 - a * w <= 0.0 || 1.0 + a * w <= 0.0)
      throw Error(ErrorCode::StencilInvalid, "recover_cone_values: stencil node violates the probe bound");

  ConeRecovery result;
  result.determinant = vandermonde_det(alphas);
  if (result.determinant == 0.0)
    throw Error(ErrorCode::SingularSystem, "recover_cone_values: repeated slopes");

  const auto m = [&](double t) { return integrals(t) / (h * std::sqrt(1.0 + t * t)); };
  // A minimal degree-(n-1) fit cannot resolve the leading Taylor coefficients
  // accurately; the extra fitted orders absorb the curvature of m beyond the
  // truncation.
  const int fit_degree = n + 7;
  result.coefficients = fit_taylor_coefficients(m, w, n - 1, fit_degree);

  const Eigen::MatrixXd A = vandermonde_matrix(alphas);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  result.condition = svd.singularValues()(0) / svd.singularValues()(n - 1);
  Eigen::VectorXd rhs(n);
  for (int k = 0; k < n; ++k) rhs(k) = result.coefficients[k];
  const Eigen::VectorXd a = A.partialPivLu().solve(rhs);
  result.values.assign(a.data(), a.data() + n);
  return result;
}

}  // namespace pcx
