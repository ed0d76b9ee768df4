#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcxray/io.hpp"
#include "pcxray/tiling.hpp"

#include "helpers.hpp"

#include <cmath>
#include <random>

using namespace pcx;

namespace {

std::shared_ptr<Tiling> ring8() { return load_tiling(fixture("mesh_ring8.json"), Domain::disk(1.0)); }
std::shared_ptr<Tiling> tworing24() {
  return load_tiling(fixture("mesh_tworing24.json"), Domain::disk(1.0));
}

Vec2 centroid(const Tiling& t, int tri) {
  const Triangle& tr = t.triangles()[tri];
  return (t.vertices()[tr.v[0]] + t.vertices()[tr.v[1]] + t.vertices()[tr.v[2]]) / 3.0;
}

}  // namespace

TEST_CASE("depth classification") {
  auto t = ring8();
  CHECK(depth(*t, centroid(*t, 0)) == 0);
  // Midpoint of the straight spoke from the center to a rim vertex.
  CHECK(depth(*t, 0.5 * (t->vertices()[0] + t->vertices()[1]), 1e-9) == 1);
  CHECK(depth(*t, t->vertices()[0], 1e-9) == 2);
  CHECK(depth(*t, t->vertices()[3], 1e-9) == 2);
  CHECK_THROWS_AS(depth(*t, Vec2(2.0, 2.0), 1e-9), Error);
}

TEST_CASE("locate returns the containing triangle") {
  auto t = ring8();
  for (int tri = 0; tri < t->triangle_count(); ++tri) {
    const LocateResult lr = locate(*t, centroid(*t, tri));
    CHECK(lr.triangle == tri);
    CHECK_FALSE(lr.on_skeleton);
  }
  CHECK(locate(*t, t->vertices()[2]).on_skeleton);
  CHECK_THROWS_AS(locate(*t, Vec2(1.5, 0.0)), Error);
}

TEST_CASE("locate agrees with a brute-force containment scan") {
  auto t = tworing24();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tested = 0;
  while (tested < 200) {
    const Vec2 p(u(rng), u(rng));
    if (p.norm() > 0.999) continue;
    bool on_edge = false;
    std::vector<int> hits;
    for (int tri = 0; tri < t->triangle_count(); ++tri) {
      if (t->triangle_contains(tri, p, kSkeletonTol)) hits.push_back(tri);
      if (t->skeleton_distance(tri, p) < 1e-7) on_edge = true;
    }
    if (on_edge || hits.size() != 1) continue;  // ambiguous points are skipped
    const LocateResult lr = locate(*t, p);
    CHECK(lr.triangle == hits[0]);
    ++tested;
  }
}

TEST_CASE("adjacency counts straight edges twice at most and arc edges once") {
  auto t = tworing24();
  for (const auto& [edge, owners] : t->adjacency()) {
    bool arc = false;
    for (int tri : owners) {
      const Triangle& tr = t->triangles()[tri];
      for (int k = 0; k < 3; ++k) {
        int a = tr.v[k], b = tr.v[(k + 1) % 3];
        if (std::minmax(a, b) == std::minmax(edge.first, edge.second) && tr.edges[k] == EdgeKind::Arc)
          arc = true;
      }
    }
    if (arc) {
      CHECK(owners.size() == 1);
    } else {
      CHECK(owners.size() >= 1);
      CHECK(owners.size() <= 2);
    }
  }
}

TEST_CASE("triangle areas sum to the disk area within 1 percent") {
  for (auto t : {ring8(), tworing24()}) {
    double sum = 0.0;
    for (int tri = 0; tri < t->triangle_count(); ++tri) {
      const double a = t->triangle_area(tri);
      CHECK(a > 0.0);
      sum += a;
    }
    CHECK(std::abs(sum - M_PI) <= 0.01 * M_PI);
  }
}

TEST_CASE("tangent fan at a depth-0 point is a single full sector") {
  auto t = ring8();
  PiecewiseConstantFunction f{t, std::vector<double>(t->triangle_count(), 0.0)};
  f.values[4] = 7.0;
  const TangentFan fan = tangent_fan(f, MetricField::euclidean(), centroid(*t, 4));
  REQUIRE(fan.sectors.size() == 1);
  CHECK(fan.sectors[0].value == 7.0);
  CHECK(fan.sectors[0].end - fan.sectors[0].start == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("tangent fan widths sum to 2 pi at interior vertices") {
  for (auto t : {ring8(), tworing24()}) {
    PiecewiseConstantFunction f{t, std::vector<double>(t->triangle_count(), 1.0)};
    const TangentFan fan = tangent_fan(f, MetricField::euclidean(), t->vertices()[0]);
    double width = 0.0;
    for (const auto& s : fan.sectors) width += s.end - s.start;
    CHECK(width == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
  }
  // An inner-ring vertex of the two-ring mesh has five incident triangles.
  auto t = tworing24();
  PiecewiseConstantFunction f{t, std::vector<double>(t->triangle_count(), 1.0)};
  const TangentFan fan = tangent_fan(f, MetricField::euclidean(), t->vertices()[1]);
  CHECK(fan.sectors.size() == 5);
  double width = 0.0;
  for (const auto& s : fan.sectors) width += s.end - s.start;
  CHECK(width == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
}

TEST_CASE("tangent fan widths sum to pi at a boundary vertex") {
  auto t = ring8();
  PiecewiseConstantFunction f{t, std::vector<double>(t->triangle_count(), 1.0)};
  const TangentFan fan = tangent_fan(f, MetricField::euclidean(), t->vertices()[3]);
  CHECK(fan.sectors.size() == 2);
  double width = 0.0;
  for (const auto& s : fan.sectors) width += s.end - s.start;
  CHECK(width == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("tangent fan at a depth-1 edge point has two half-plane sectors") {
  auto t = ring8();
  PiecewiseConstantFunction f{t, std::vector<double>(t->triangle_count(), 1.0)};
  const Vec2 p = 0.5 * (t->vertices()[0] + t->vertices()[1]);
  const TangentFan fan = tangent_fan(f, MetricField::euclidean(), p);
  CHECK(fan.sectors.size() == 2);
  for (const auto& s : fan.sectors) CHECK(s.end - s.start == doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("shipped fixtures validate cleanly") {
  const Domain dom = Domain::disk(1.0);
  for (const char* name : {"mesh_ring8.json", "mesh_tworing24.json", "mesh_halfdisk4.json",
                           "mesh_wedge4.json"}) {
    auto t = load_tiling(fixture(name), dom);
    const TilingReport rep = validate_tiling(*t, dom, 2000, 9);
    for (const auto& v : rep.violations) MESSAGE(name, ": ", v);
    CHECK(rep.pass());
  }
}

TEST_CASE("two triangles sharing one full edge validate (coverage off)") {
  const Domain dom = Domain::disk(1.0);
  std::vector<Vec2> verts{{-0.9, 0.0}, {0.9, 0.0}, {0.0, 0.9}, {0.0, -0.9}};
  std::vector<Triangle> tris{
      {{0, 1, 2}, {EdgeKind::Straight, EdgeKind::Straight, EdgeKind::Straight}},
      {{0, 1, 3}, {EdgeKind::Straight, EdgeKind::Straight, EdgeKind::Straight}},
  };
  const Tiling t(verts, tris, dom);
  CHECK(validate_tiling(t, dom, 0, 1).pass());
}

TEST_CASE("overlapping triangles are flagged") {
  const Domain dom = Domain::disk(1.0);
  std::vector<Vec2> verts{{-0.9, 0.0}, {0.9, 0.0}, {0.0, 0.9}, {-0.9, -0.2}, {0.9, -0.2}, {0.0, 0.7}};
  std::vector<Triangle> tris{
      {{0, 1, 2}, {EdgeKind::Straight, EdgeKind::Straight, EdgeKind::Straight}},
      {{3, 4, 5}, {EdgeKind::Straight, EdgeKind::Straight, EdgeKind::Straight}},
  };
  const Tiling t(verts, tris, dom);
  const TilingReport rep = validate_tiling(t, dom, 0, 1);
  CHECK_FALSE(rep.pass());
  bool overlap = false;
  for (const auto& v : rep.violations) overlap = overlap || v.find("overlap") != std::string::npos;
  CHECK(overlap);
}

TEST_CASE("a T-junction fails depth consistency") {
  const Domain dom = Domain::disk(1.0);
  std::vector<Vec2> verts{{-0.8, 0.0}, {0.8, 0.0}, {0.0, -0.8}, {0.0, 0.0}, {0.0, 0.8}};
  std::vector<Triangle> tris{
      {{0, 1, 2}, {EdgeKind::Straight, EdgeKind::Straight, EdgeKind::Straight}},
      {{0, 3, 4}, {EdgeKind::Straight, EdgeKind::Straight, EdgeKind::Straight}},
      {{3, 1, 4}, {EdgeKind::Straight, EdgeKind::Straight, EdgeKind::Straight}},
  };
  const Tiling t(verts, tris, dom);
  const TilingReport rep = validate_tiling(t, dom, 0, 1);
  CHECK_FALSE(rep.pass());
  bool depth_violation = false;
  for (const auto& v : rep.violations)
    depth_violation = depth_violation || v.find("open edge") != std::string::npos;
  CHECK(depth_violation);
}
