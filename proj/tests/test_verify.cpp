#include "tsol/catalog.hpp"
#include "tsol/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace tsol;

namespace {

GridSpec square(double half, double h) {
  return GridSpec::box(Vector::Constant(2, -half), Vector::Constant(2, half), h);
}

}  // namespace

TEST_CASE("translator residual of exact and refined surfaces") {
  Vector w = Vector::Zero(3);
  w(1) = 1.0;
  CHECK(translator_residual(minimal_cylinder(w, 0.2, 1.0, 0.1)).max_abs == 0.0);

  std::vector<ResidualReport> r;
  for (double h : {0.04, 0.02, 0.01}) r.push_back(translator_residual(graph_geometry(grim_reaper(2, square(1.2, h)))));
  CHECK(r[0].max_abs / r[1].max_abs == doctest::Approx(4.0).epsilon(0.1));
  CHECK(r[1].max_abs / r[2].max_abs == doctest::Approx(4.0).epsilon(0.1));
  CHECK(*convergence_order(r) >= 1.8);
  for (const auto& x : r) CHECK(x.passes());
  CHECK_THROWS_AS(translator_residual(SurfaceSample{}), std::invalid_argument);
}

TEST_CASE("unit sphere is a negative control") {
  const SurfaceSample s = sample_sphere(2, 1.0, Vector::Zero(3), 40);
  // inward normal: H = 2 and <e_3, nu> = -cos(phi) reaches -1 at the north pole
  const ResidualReport r = translator_residual(s);
  CHECK(r.max_abs == doctest::Approx(3.0).epsilon(1e-2));
  CHECK_FALSE(r.passes());
  CHECK(oy_bound_checks(s).max_abs > 0.5);
}

TEST_CASE("conformal mean curvature") {
  const GridSpec g = square(1.0, 0.1);
  const SurfaceSample flat = graph_geometry(GraphPatch{g, Vector::Zero(g.size()), GraphDirection::Vertical, {}});
  const Vector hi = hi_mean_curvature(flat);
  for (Index i = 0; i < hi.size(); ++i) {
    if (std::isfinite(hi(i))) CHECK(hi(i) == doctest::Approx(-1.0));
  }
  const SurfaceSample s = graph_geometry(grim_reaper(2, square(1.0, 0.02)));
  const Vector t = translator_residuals(s);
  const Vector c = hi_mean_curvature(s);
  for (Index i = 0; i < s.size(); ++i) {
    if (!std::isfinite(t(i))) continue;
    CHECK(c(i) * std::exp(s.points(i, 2) / 2.0) == doctest::Approx(t(i)).epsilon(1e-12));
  }
  CHECK(hi_minimality_residual(s).max_abs < 10 * 0.02 * 0.02);
}

TEST_CASE("main identity on the vertical plane matches the closed form") {
  const double R = 1.0, xi = 0.6, c = 0.3;
  const DistanceField df(R, xi);
  const GraphPatch p = vertical_plane_patch(c, square(0.4, 0.01));
  const SurfaceSample s = graph_geometry(p);
  const double a = R / xi - c;
  for (Index i = 0; i < s.size(); ++i) {
    const auto t = identity_terms(df, s.points.row(i).transpose(), s.normals.row(i).transpose(), s.mean_curvature(i));
    const double d = t.distance;
    CHECK(std::abs(t.ambient_laplacian - a * a / (d * d * d)) <= 1e-10);
    CHECK(std::abs(t.identity_rhs - a * a / (d * d * d)) <= 1e-10);
  }
  CHECK(laplacian_two_route_check(p, df).max_abs < 1e-4);
}

TEST_CASE("main identity converges on the grim reaper") {
  const DistanceField df(1.0, 0.6);
  std::vector<ResidualReport> r;
  for (double h : {0.04, 0.02, 0.01}) r.push_back(main_identity_check(grim_reaper(2, square(0.8, h)), df));
  CHECK(*convergence_order(r) >= 1.8);
}

TEST_CASE("ambient Laplacian of d is 1/d") {
  const DistanceField df(1.5, 0.7);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int k = 0; k < 100; ++k) {
    Vector x(3);
    for (Index i = 0; i < 3; ++i) x(i) = u(rng);
    const auto j = df.evaluate(x);
    CHECK(j.hessian.trace() == doctest::Approx(1.0 / j.distance).epsilon(1e-12));
  }
}

TEST_CASE("norm Laplacian bound on a plane and a bowl") {
  Vector w = Vector::Zero(3);
  w(0) = 1.0;
  const SurfaceSample plane = minimal_cylinder(w, 1.0, 1.0, 0.1);
  const Vector lap = norm_laplacian(plane);
  for (Index i = 0; i < plane.size(); ++i) {
    const Vector p = plane.points.row(i).transpose();
    const double r = p.norm();
    // the normal component of p/|p| on x_1 = 1 is 1/|p|
    CHECK(lap(i) == doctest::Approx((1.0 + 1.0 / (r * r)) / r).epsilon(1e-12));
    CHECK(std::abs(lap(i)) <= 2.0 / r + 1.0);
  }
  CHECK(oy_bound_checks(plane).max_abs == 0.0);
  const Bowl b(2, 4.0);
  const SurfaceSample bs = graph_geometry(bowl_patch(b, square(2.0, 0.05)));
  CHECK(bs.mean_curvature.cwiseAbs().maxCoeff() <= 1.0 + 1e-3);
}

TEST_CASE("Killing coordinate residual") {
  const GraphPatch plane = vertical_plane_patch(0.4, square(1.0, 0.1));
  CHECK(killing_coordinate_check(plane, 1).max_abs <= 1e-12);
  std::vector<ResidualReport> r;
  for (double h : {0.04, 0.02, 0.01}) r.push_back(killing_coordinate_check(grim_reaper(2, square(0.8, h)), 0));
  CHECK(*convergence_order(r) >= 1.8);
  CHECK_THROWS_AS(killing_coordinate_check(grim_reaper(2, square(0.8, 0.1)), 2), std::invalid_argument);
}
