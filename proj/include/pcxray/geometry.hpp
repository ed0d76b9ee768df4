#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcx {

using Vec2 = Eigen::Vector2d;

enum class ErrorCode {
  StartOutside,
  Trapped,
  NotOnBoundary,
  DistanceOutOfRange,
  OutsideTiling,
  PathLeavesTiling,
  ProbeDegenerate,
  AlphasNotDescending,
  SingularSystem,
  StencilInvalid,
  NotShort,
  TangentialSector,
  DegenerateCone,
  UnderdeterminedLayer,
  RankDeficient,
  ConvexityCheckFailed,
  BadInput,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

/// Conformal metric g = e^{2 lambda(x)} * identity on a planar chart.
/// The log-factor is radial: lambda(x) = p(|x|^2) with p either a polynomial
/// or log(1 + r^2); the euclidean metric is lambda = 0.
struct MetricField {
  enum class Kind { Euclidean, ConformalRadial };
  enum class Profile { Poly, Log1R2 };

  Kind kind = Kind::Euclidean;
  Profile profile = Profile::Poly;
  std::vector<double> coeffs;  // p(s) = sum_k coeffs[k] s^k, s = |x|^2

  double logfactor(const Vec2& x) const;
  Vec2 logfactor_gradient(const Vec2& x) const;
  double conformal_factor(const Vec2& x) const;  // e^{lambda}
  double riemannian_norm(const Vec2& x, const Vec2& v) const;

  static MetricField euclidean();
  static MetricField radial_poly(std::vector<double> coeffs);
  static MetricField log_radial();
};

/// Strictly convex region given implicitly by b(x) < 0.
struct Domain {
  enum class Kind { Disk, Ellipse, ImplicitPoly };
  struct Term {
    int px = 0, py = 0;
    double c = 0.0;
  };

  Kind kind = Kind::Disk;
  double a = 1.0, b = 1.0;       // disk radius in a; ellipse semi-axes
  std::vector<Term> terms;       // implicit-poly: sum c x^px y^py

  double boundary_function(const Vec2& x) const;
  Vec2 boundary_gradient(const Vec2& x) const;
  bool inside(const Vec2& x, double tol = 0.0) const;
  double chart_diameter() const;
  /// Boundary point at chart angle t (star-shaped about the origin).
  Vec2 boundary_point(double t) const;

  static Domain disk(double radius);
  static Domain ellipse(double a, double b);
};

struct PathSample {
  Vec2 x;
  Vec2 v;   // chart velocity, unit Riemannian speed
  double s; // Riemannian arclength from entry
};

struct GeodesicPath {
  enum class Status { Complete, TrappedGuardHit };

  std::vector<PathSample> samples;
  double total_length = 0.0;
  Vec2 entry_point = Vec2::Zero();
  Vec2 exit_point = Vec2::Zero();
  Status status = Status::Complete;
};

/// Strictly convex exhaustion function; only the radial-quadratic phi = |x|^2
/// is shipped.
struct FoliationFunction {
  enum class Kind { RadialQuadratic };
  Kind kind = Kind::RadialQuadratic;
  double scale = 1.0;

  double value(const Vec2& x) const { return scale * x.squaredNorm(); }
  Vec2 gradient(const Vec2& x) const { return 2.0 * scale * x; }
};

struct ConvexityReport {
  double min_second_derivative = 0.0;
  bool pass = false;
  int trials = 0;
  int trapped_skipped = 0;
};

/// Gamma[k][i][j] at x for the conformal metric.
using Christoffel = std::array<std::array<std::array<double, 2>, 2>, 2>;

Christoffel christoffel(const MetricField& metric, const Vec2& x);

constexpr double kDefaultStep = 1e-3;

/// Unit-Riemannian-speed geodesic through (start, direction), traced to the
/// boundary in both directions.  start must satisfy b(start) <= 1e-9; a
/// boundary start must point strictly inward.
GeodesicPath trace_geodesic(const MetricField& metric, const Domain& domain, const Vec2& start,
                            const Vec2& direction, double step = kDefaultStep);

/// Free geodesic stepping ignoring any domain: advances (x, v) by Riemannian
/// arclength `length` with fixed RK4 steps.  Used by curvature and convexity
/// probes.
std::pair<Vec2, Vec2> flow_geodesic(const MetricField& metric, const Vec2& start, const Vec2& direction,
                                    double length, double step = kDefaultStep);

Vec2 parallel_transport(const MetricField& metric, const GeodesicPath& path, const Vec2& w,
                        double distance);

Vec2 boundary_normal(const Domain& domain, const MetricField& metric, const Vec2& x);

double second_fundamental_form(const Domain& domain, const MetricField& metric, const Vec2& x);

ConvexityReport check_strictly_convex(const MetricField& metric, const Domain& domain,
                                      const FoliationFunction& phi, int trials, std::uint64_t seed);

}  // namespace pcx
