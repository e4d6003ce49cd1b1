#include "tsol/catalog.hpp"
#include "tsol/geometry.hpp"
#include "tsol/hull.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tsol;

namespace {

GridSpec square(double half, double h) {
  return GridSpec::box(Vector::Constant(2, -half), Vector::Constant(2, half), h);
}

Index centre_row(const SurfaceSample& s) {
  Index best = 0;
  s.points.leftCols(2).rowwise().norm().minCoeff(&best);
  return best;
}

}  // namespace

TEST_CASE("project drops the last coordinate") {
  Vector p(3);
  p << 1, 2, 3;
  CHECK(project(p) == Eigen::Vector2d(1, 2));
  const double R = 1.0, xi = 0.6;
  Vector q(3);
  q << R / xi, 0, 5;
  CHECK(project(q) == Eigen::Vector2d(R / xi, 0));
}

TEST_CASE("projection and hull commute on a tilted square") {
  Matrix s(4, 3);
  s << 0, 0, 0, 1, 0, 1, 0, 1, 2, 1, 1, 3;
  const ConvexHull full = convex_hull(s);
  const Matrix projected_vertices = full.vertices.leftCols(2);
  const ConvexHull a = convex_hull(s.leftCols(2));
  const ConvexHull b = convex_hull(projected_vertices);
  CHECK(a.vertices == b.vertices);
  CHECK(a.vertices.rows() == 4);
}

TEST_CASE("graph geometry of a flat plane") {
  GraphPatch p{square(1.0, 0.1), Vector::Zero(square(1.0, 0.1).size()), GraphDirection::Vertical, {}};
  const SurfaceSample s = graph_geometry(p);
  CHECK(s.mean_curvature.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.normals.col(2).minCoeff() == 1.0);
}

TEST_CASE("grim reaper at the axis has H = 1 and vertical normal") {
  const SurfaceSample s = graph_geometry(grim_reaper(2, square(0.5, 0.01)));
  const Index i = centre_row(s);
  // u'(0) = 0 and u''(0) = 1 for -ln cos x
  CHECK(s.mean_curvature(i) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(s.normals(i, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bowl tip curvature tends to 1") {
  const Bowl b(2, 2.0);
  double prev = 1.0;
  for (double h : {0.04, 0.02, 0.01}) {
    const SurfaceSample s = graph_geometry(bowl_patch(b, square(0.2, h)));
    const double err = std::abs(s.mean_curvature(centre_row(s)) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("graph geometry rejects thin patches") {
  Vector lo(2), hi(2);
  lo << 0, 0;
  hi << 1, 0.1;
  const GridSpec g = GridSpec::box(lo, hi, 0.1);
  CHECK_THROWS_AS(graph_geometry(GraphPatch{g, Vector::Zero(g.size()), GraphDirection::Vertical, {}}),
                  std::invalid_argument);
}

TEST_CASE("surface Laplacian of constants and of the height") {
  const GraphPatch p = grim_reaper(2, square(0.8, 0.02));
  const Vector lap = surface_laplacian(p, Vector::Constant(p.grid.size(), 3.0));
  for (Index i = 0; i < lap.size(); ++i) {
    if (std::isfinite(lap(i))) CHECK(lap(i) == doctest::Approx(0.0).epsilon(1e-12));
  }
  // height is subharmonic with Laplacian H^2 = cos^2 x on the grim reaper
  const Vector lh = surface_laplacian(p, p.values);
  double err = 0.0;
  for (Index i = 0; i < lh.size(); ++i) {
    if (!std::isfinite(lh(i))) continue;
    const double c = std::cos(p.grid.coordinate(i)(0));
    err = std::max(err, std::abs(lh(i) - c * c));
  }
  CHECK(err < 1e-3);
}

TEST_CASE("surface Laplacian of d on a vertical plane") {
  const double R = 1.0, xi = 0.6, c = 0.3;
  const DistanceField df(R, xi);
  const GraphPatch p = vertical_plane_patch(c, square(0.5, 0.01));
  const SurfaceSample s = graph_geometry(p);
  Vector d(p.grid.size());
  for (Index node = 0; node < p.grid.size(); ++node) d(node) = df.distance(Vector(p.point(node)));
  const Vector lap = surface_laplacian(p, d);
  const double a = std::abs(c - R / xi);
  double err = 0.0;
  for (Index node = 0; node < p.grid.size(); ++node) {
    if (!std::isfinite(lap(node))) continue;
    const double dd = d(node);
    err = std::max(err, std::abs(lap(node) - a * a / (dd * dd * dd)));
  }
  CHECK(err < 1e-4);
}

TEST_CASE("distance field values and spectrum") {
  const double R = 2.0, xi = 0.8;
  const DistanceField df(R, xi);
  Vector on(3);
  on << R / xi, 0, 7;
  CHECK(df.distance(on) == 0.0);
  CHECK_THROWS_AS(df.evaluate(on), std::domain_error);
  Vector p(3);
  p << R / xi + 3, 4, 0;
  const auto jet = df.evaluate(p);
  CHECK(jet.distance == doctest::Approx(5.0));
  CHECK(jet.hessian.trace() == doctest::Approx(0.2));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 1000; ++k) {
    Vector x(4);
    for (Index i = 0; i < 4; ++i) x(i) = u(rng);
    const auto j = df.evaluate(x);
    CHECK(std::abs(j.gradient.norm() - 1.0) <= 1e-12);
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(j.eigenvalues(i)) <= 1e-10);
    CHECK(std::abs(j.eigenvalues(3) - 1.0 / j.distance) <= 1e-10);
    CHECK(std::abs(j.chi.norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("unit normals on generated samples") {
  const SurfaceSample s = graph_geometry(tilted_grim_reaper(2, 0.3, square(0.6, 0.05)));
  for (Index i = 0; i < s.size(); ++i) CHECK(std::abs(s.normals.row(i).norm() - 1.0) <= 1e-12);
}
