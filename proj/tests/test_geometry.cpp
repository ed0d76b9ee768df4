#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcxray/geometry.hpp"

#include <cmath>
#include <random>

using namespace pcx;

TEST_CASE("logfactor gradient matches finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (const MetricField& m :
       {MetricField::radial_poly({0.0, 1.0, -0.3}), MetricField::log_radial()}) {
    for (int i = 0; i < 50; ++i) {
      const Vec2 x(u(rng), u(rng));
      const double eps = 1e-6;
      const Vec2 fd((m.logfactor(x + Vec2(eps, 0)) - m.logfactor(x - Vec2(eps, 0))) / (2 * eps),
                    (m.logfactor(x + Vec2(0, eps)) - m.logfactor(x - Vec2(0, eps))) / (2 * eps));
      const Vec2 g = m.logfactor_gradient(x);
      CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("christoffel vanishes for the euclidean metric") {
  const auto g = christoffel(MetricField::euclidean(), Vec2(0.3, -0.4));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(g[k][i][j] == 0.0);
}

TEST_CASE("christoffel is symmetric and matches the finite-difference formula") {
  const MetricField m = MetricField::radial_poly({0.0, 1.0});
  const Vec2 x(0.3, 0.0);
  const auto g = christoffel(m, x);
  const double eps = 1e-6;
  const Vec2 dl((m.logfactor(x + Vec2(eps, 0)) - m.logfactor(x - Vec2(eps, 0))) / (2 * eps),
                (m.logfactor(x + Vec2(0, eps)) - m.logfactor(x - Vec2(0, eps))) / (2 * eps));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK(g[k][i][j] == doctest::Approx(g[k][j][i]).epsilon(1e-14));
        double expected = 0.0;
        if (i == k) expected += dl[j];
        if (j == k) expected += dl[i];
        if (i == j) expected -= dl[k];
        CHECK(g[k][i][j] == doctest::Approx(expected).epsilon(1e-6));
      }
}

TEST_CASE("euclidean diameter geodesic") {
  const auto path = trace_geodesic(MetricField::euclidean(), Domain::disk(1.0), Vec2(-1, 0), Vec2(1, 0));
  CHECK(path.total_length == doctest::Approx(2.0).epsilon(1e-8));
  CHECK((path.exit_point - Vec2(1, 0)).norm() <= 1e-8);
  CHECK(path.status == GeodesicPath::Status::Complete);
}

TEST_CASE("log-radial diameter has length 8/3") {
  const auto path = trace_geodesic(MetricField::log_radial(), Domain::disk(1.0), Vec2(-1, 0), Vec2(1, 0));
  CHECK(path.total_length == doctest::Approx(8.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("euclidean chords exit where the chord says") {
  const Vec2 p(std::cos(1.0), std::sin(1.0));
  const Vec2 q(std::cos(2.0), std::sin(2.0));
  const auto path = trace_geodesic(MetricField::euclidean(), Domain::disk(1.0), p, q - p);
  CHECK((path.exit_point - q).norm() <= 1e-8);
  CHECK(path.total_length == doctest::Approx((q - p).norm()).epsilon(1e-8));
}

TEST_CASE("interior starts back-trace to a consistent full chord") {
  const auto path =
      trace_geodesic(MetricField::euclidean(), Domain::disk(1.0), Vec2(0.2, 0.1), Vec2(0.3, 1.0));
  CHECK(std::abs(Domain::disk(1.0).boundary_function(path.entry_point)) <= 1e-9);
  CHECK(std::abs(Domain::disk(1.0).boundary_function(path.exit_point)) <= 1e-9);
  CHECK(path.total_length == doctest::Approx((path.exit_point - path.entry_point).norm()).epsilon(1e-8));
}

TEST_CASE("trace_geodesic rejects outside starts") {
  CHECK_THROWS_AS(trace_geodesic(MetricField::euclidean(), Domain::disk(1.0), Vec2(2, 0), Vec2(1, 0)),
                  Error);
}

TEST_CASE("paths keep unit riemannian speed and increasing arclength") {
  for (const MetricField& m : {MetricField::euclidean(), MetricField::log_radial()}) {
    const auto path = trace_geodesic(m, Domain::disk(1.0), Vec2(-0.9, 0.2), Vec2(1.0, 0.3));
    double prev = -1.0;
    for (const auto& s : path.samples) {
      CHECK(std::abs(m.riemannian_norm(s.x, s.v) - 1.0) <= 1e-8);
      CHECK(s.s > prev);
      prev = s.s;
    }
  }
}

TEST_CASE("geodesic reversibility on random rays") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  const Domain dom = Domain::disk(1.0);
  for (const MetricField& m : {MetricField::euclidean(), MetricField::log_radial()}) {
    for (int i = 0; i < 20; ++i) {
      const double t = u(rng);
      const Vec2 start = dom.boundary_point(t);
      const Vec2 nrm = -dom.boundary_gradient(start).normalized();
      const double phi = u(rng) / (2.0 * M_PI) * 2.0 - 1.0;  // angle offset in (-1, 1) rad
      const Vec2 dir = std::cos(phi) * nrm + std::sin(phi) * perp(nrm);
      const auto path = trace_geodesic(m, dom, start, dir);
      const auto back = trace_geodesic(m, dom, path.exit_point, -path.samples.back().v);
      CHECK((back.exit_point - start).norm() <= 1e-6);
    }
  }
}

TEST_CASE("halving the step changes the length below 1e-7") {
  const auto a =
      trace_geodesic(MetricField::log_radial(), Domain::disk(1.0), Vec2(-0.8, 0.3), Vec2(1, 0.2), 1e-3);
  const auto b =
      trace_geodesic(MetricField::log_radial(), Domain::disk(1.0), Vec2(-0.8, 0.3), Vec2(1, 0.2), 5e-4);
  CHECK(std::abs(a.total_length - b.total_length) <= 1e-7);
}

TEST_CASE("parallel transport is the identity in the euclidean metric") {
  const auto path = trace_geodesic(MetricField::euclidean(), Domain::disk(1.0), Vec2(-1, 0), Vec2(1, 0));
  const Vec2 w = parallel_transport(MetricField::euclidean(), path, Vec2(0, 1), path.total_length);
  CHECK((w - Vec2(0, 1)).norm() <= 1e-10);
}

TEST_CASE("parallel transport preserves riemannian norms") {
  const MetricField m = MetricField::log_radial();
  const auto path = trace_geodesic(m, Domain::disk(1.0), Vec2(-1, 0), Vec2(1, 0.4));
  const Vec2 w0(0.3, 1.1);
  for (double d : {0.2, 0.8, path.total_length}) {
    const Vec2 w = parallel_transport(m, path, w0, d);
    CHECK(std::abs(m.riemannian_norm(path.samples.front().x, w0) -
                   m.riemannian_norm(path.samples.front().x, w0)) == 0.0);
    // Locate the sample at distance d for the endpoint norm.
    Vec2 xe = path.samples.back().x;
    for (std::size_t i = 0; i + 1 < path.samples.size(); ++i) {
      if (path.samples[i + 1].s >= d) {
        const auto& a = path.samples[i];
        const auto& b = path.samples[i + 1];
        xe = a.x + (d - a.s) / (b.s - a.s) * (b.x - a.x);
        break;
      }
    }
    CHECK(std::abs(m.riemannian_norm(xe, w) - m.riemannian_norm(path.samples.front().x, w0)) <= 1e-8);
  }
  CHECK_THROWS_AS(parallel_transport(m, path, w0, path.total_length + 1.0), Error);
}

TEST_CASE("parallel transport matches a 10x finer integration") {
  const MetricField m = MetricField::log_radial();
  const auto coarse = trace_geodesic(m, Domain::disk(1.0), Vec2(-1, 0), Vec2(1, 0), 1e-3);
  const auto fine = trace_geodesic(m, Domain::disk(1.0), Vec2(-1, 0), Vec2(1, 0), 1e-4);
  const Vec2 w0(0, 1);  // orthogonal to the diameter
  const Vec2 wc = parallel_transport(m, coarse, w0, coarse.total_length);
  const Vec2 wf = parallel_transport(m, fine, w0, fine.total_length);
  CHECK((wc - wf).norm() <= 1e-7);
}

TEST_CASE("boundary normal") {
  const Domain dom = Domain::disk(1.0);
  CHECK((boundary_normal(dom, MetricField::euclidean(), Vec2(0, -1)) - Vec2(0, 1)).norm() <= 1e-12);
  CHECK((boundary_normal(dom, MetricField::euclidean(), Vec2(1, 0)) - Vec2(-1, 0)).norm() <= 1e-12);
  const MetricField m = MetricField::log_radial();
  const Vec2 n = boundary_normal(dom, m, Vec2(0, -1));
  CHECK((n - Vec2(0, std::exp(-m.logfactor(Vec2(0, -1))))).norm() <= 1e-12);
  CHECK(m.riemannian_norm(Vec2(0, -1), n) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(boundary_normal(dom, m, Vec2(0.5, 0)), Error);
}

TEST_CASE("second fundamental form of circles is 1/R") {
  for (double R : {0.5, 1.0, 2.0, 4.0}) {
    const double k = second_fundamental_form(Domain::disk(R), MetricField::euclidean(), Vec2(R, 0));
    CHECK(k == doctest::Approx(1.0 / R).epsilon(1e-3));
  }
}

TEST_CASE("second fundamental form of the ellipse at the semi-major vertex") {
  const double k = second_fundamental_form(Domain::ellipse(2, 1), MetricField::euclidean(), Vec2(2, 0));
  CHECK(k == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("strict convexity check") {
  const FoliationFunction phi;
  const auto rep = check_strictly_convex(MetricField::euclidean(), Domain::disk(1.0), phi, 32, 5);
  CHECK(rep.pass);
  CHECK(rep.min_second_derivative == doctest::Approx(2.0).epsilon(1e-4));

  FoliationFunction concave;
  concave.scale = -1.0;
  CHECK_FALSE(check_strictly_convex(MetricField::euclidean(), Domain::disk(1.0), concave, 8, 5).pass);

  const auto rep2 =
      check_strictly_convex(MetricField::radial_poly({0.0, 0.1}), Domain::disk(1.0), phi, 16, 5);
  CHECK(rep2.min_second_derivative > 0.0);
}
