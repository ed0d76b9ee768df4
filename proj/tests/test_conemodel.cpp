#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcxray/conemodel.hpp"
#include "pcxray/geometry.hpp"

#include <cmath>
#include <random>

using namespace pcx;

namespace {

// Independent oracle: walk the probe line, detect wedge-membership changes by
// sign bisection on x - alpha_i * y, and sum value * chart length per piece.
double quadrature_oracle(const ConeSpec& cone, const LineProbe& probe) {
  const int n = cone.n();
  const auto y_of = [&](double x) { return probe.h + probe.t * x; };
  // Crossing of the ray x = alpha_i y by bisection on g(x) = x - alpha_i y(x).
  std::vector<double> xs;
  for (int i = 0; i <= n; ++i) {
    const double alpha = cone.alphas[i];
    const auto g = [&](double x) { return x - alpha * y_of(x); };
    double lo = -1e6, hi = 1e6;
    REQUIRE(g(lo) < 0.0);
    REQUIRE(g(hi) > 0.0);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0.0 ? lo : hi) = mid;
    }
    xs.push_back(0.5 * (lo + hi));
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x0 = std::min(xs[i], xs[i + 1]);
    const double x1 = std::max(xs[i], xs[i + 1]);
    // Confirm membership at the midpoint of the piece.
    const double xm = 0.5 * (x0 + x1);
    const double ym = y_of(xm);
    REQUIRE(ym > 0.0);
    REQUIRE(xm <= cone.alphas[i] * ym);
    REQUIRE(xm >= cone.alphas[i + 1] * ym);
    sum += cone.values[i] * (x1 - x0) * std::sqrt(1.0 + probe.t * probe.t);
  }
  return sum;
}

}  // namespace

TEST_CASE("cone line integral examples") {
  CHECK(cone_line_integral({{1.0, 0.0}, {2.0}}, {1.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-15));
  ConeSpec cone{{2.0, 0.5, -1.0}, {3.0, -4.0}};
  const double expected = 1.0 * ((2.0 - 0.5) * 3.0 + (0.5 - -1.0) * -4.0);
  CHECK(cone_line_integral(cone, {1.0, 0.0}) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(cone_line_integral({{1.0, 0.0}, {0.0}}, {1.0, 0.2}) == 0.0);
}

TEST_CASE("cone line integral matches the bisection quadrature oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(-3.0, 3.0);
  std::uniform_real_distribution<double> uv(-5.0, 5.0);
  std::uniform_int_distribution<int> un(1, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = un(rng);
    std::vector<double> alphas;
    for (int i = 0; i <= n; ++i) alphas.push_back(ua(rng));
    std::sort(alphas.rbegin(), alphas.rend());
    bool distinct = true;
    for (int i = 0; i < n; ++i) distinct = distinct && alphas[i] - alphas[i + 1] > 1e-3;
    if (!distinct) continue;
    ConeSpec cone{alphas, {}};
    for (int i = 0; i < n; ++i) cone.values.push_back(uv(rng));
    const double w = default_stencil_halfwidth(alphas);
    for (double t : {0.0, 0.5 * w, -w}) {
      const LineProbe probe{1.0, t};
      CHECK(cone_line_integral(cone, probe) ==
            doctest::Approx(quadrature_oracle(cone, probe)).epsilon(1e-9));
    }
  }
}

TEST_CASE("degenerate probes are rejected") {
  CHECK_THROWS_AS(cone_line_integral({{2.0, 0.0}, {1.0}}, {1.0, 0.6}), Error);
  CHECK_THROWS_AS(cone_line_integral({{0.0, 1.0}, {1.0}}, {1.0, 0.0}), Error);  // not descending
}

TEST_CASE("vandermonde matrix entries") {
  const Eigen::MatrixXd a1 = vandermonde_matrix({1.0, 0.0});
  REQUIRE(a1.rows() == 1);
  CHECK(a1(0, 0) == 1.0);
  const Eigen::MatrixXd a2 = vandermonde_matrix({2.0, 1.0, 0.0});
  CHECK(a2(0, 0) == 1.0);
  CHECK(a2(0, 1) == 1.0);
  CHECK(a2(1, 0) == 3.0);
  CHECK(a2(1, 1) == 1.0);
  for (double c : {-2.5, 0.0, 4.0}) {
    const Eigen::MatrixXd m = vandermonde_matrix({c + 1.0, c});
    CHECK(m(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(vandermonde_matrix({0.0, 1.0}), Error);
}

TEST_CASE("vandermonde determinant closed form") {
  CHECK(vandermonde_det({1.0, 0.0}) == 1.0);
  CHECK(vandermonde_det({2.0, 1.0, 0.0}) == -2.0);
  CHECK(vandermonde_det({3.0, 1.0, 1.0}) == 0.0);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ua(-10.0, 10.0);
  std::uniform_int_distribution<int> un(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = un(rng);
    std::vector<double> alphas;
    for (int i = 0; i <= n; ++i) alphas.push_back(ua(rng));
    std::sort(alphas.rbegin(), alphas.rend());
    bool distinct = true;
    for (int i = 0; i < n; ++i) distinct = distinct && alphas[i] - alphas[i + 1] > 1e-6;
    if (!distinct) continue;
    const double closed = vandermonde_det(alphas);
    const double lu = vandermonde_matrix(alphas).partialPivLu().determinant();
    CHECK(std::abs(lu - closed) <= 1e-8 * std::abs(closed));
  }
}

TEST_CASE("fitted expansion coefficients match the differenced powers") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ua(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    double a = ua(rng), b = ua(rng);
    if (a < b) std::swap(a, b);
    if (a - b < 0.3) continue;
    const auto ci = [&](double t) { return a / (1.0 - a * t) - b / (1.0 - b * t); };
    const double w = default_stencil_halfwidth({a, b});
    const auto coeffs = fit_taylor_coefficients(ci, w, 5, 14);
    for (int k = 0; k <= 5; ++k) {
      const double expected = std::pow(a, k + 1) - std::pow(b, k + 1);
      CHECK(std::abs(coeffs[k] - expected) <= 1e-6 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("recovery round trips") {
  {
    // Zero data recovers exactly zero.
    const std::vector<double> alphas{2.0, 1.0, -0.5, -2.0};
    const auto I = [](double) { return 0.0; };
    const auto rec = recover_cone_values(alphas, I, 1.0, default_stencil_halfwidth(alphas));
    for (double v : rec.values) CHECK(std::abs(v) <= 1e-12);
  }
  {
    const ConeSpec cone{{1.0, 0.0}, {2.0}};
    const auto I = [&](double t) { return cone_line_integral(cone, {1.0, t}); };
    const auto rec = recover_cone_values(cone.alphas, I, 1.0, default_stencil_halfwidth(cone.alphas));
    CHECK(rec.values[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rec.determinant == doctest::Approx(vandermonde_det(cone.alphas)).epsilon(1e-12));
  }
  {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uv(-5.0, 5.0);
    const std::vector<double> alphas{2.0, 1.0, 0.5, -0.3, -1.0};
    ConeSpec cone{alphas, {}};
    for (int i = 0; i < 4; ++i) cone.values.push_back(uv(rng));
    const auto I = [&](double t) { return cone_line_integral(cone, {1.0, t}); };
    const auto rec = recover_cone_values(alphas, I, 1.0, 0.05);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rec.values[i] - cone.values[i]) <= 1e-6);
    CHECK(rec.condition > 1.0);
  }
}

TEST_CASE("recovery rejects bad stencils and repeated slopes") {
  const auto I = [](double) { return 0.0; };
  CHECK_THROWS_AS(recover_cone_values({2.0, 0.0}, I, 1.0, 0.6), Error);
  CHECK_THROWS_AS(recover_cone_values({2.0, 0.0}, I, 1.0, -0.1), Error);
  CHECK_THROWS_AS(recover_cone_values({2.0, 2.0, 0.0}, I, 1.0, 0.05), Error);
}
