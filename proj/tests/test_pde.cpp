#include "tsol/catalog.hpp"
#include "tsol/pde.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace tsol;

namespace {

double max_error(const GraphPatch& sol, const std::function<double(const Vector&)>& exact) {
  double err = 0.0;
  for (Index node = 0; node < sol.grid.size(); ++node) {
    if (!sol.active(node)) continue;
    err = std::max(err, std::abs(sol.values(node) - exact(sol.grid.coordinate(node))));
  }
  return err;
}

}  // namespace

TEST_CASE("bowl on a disk is recovered to second order") {
  const Bowl b(2, 4.0);
  const auto exact = [&b](const Vector& y) { return b.height(y.norm()); };
  double prev = 0.0;
  for (double h : {0.2, 0.1}) {
    const GraphPatch problem = ball_problem(Vector::Zero(2), 2.0, h, GraphDirection::Vertical, exact);
    const auto [sol, report] = solve_vertical(problem);
    REQUIRE(report.converged);
    CHECK(report.final_residual <= 1e-10);
    CHECK_FALSE(report.nonexistence_flag);
    const double err = max_error(sol, exact);
    CHECK(err / (h * h) <= 0.05);
    if (prev > 0.0) CHECK(prev / err >= 3.0);
    prev = err;
  }
}

TEST_CASE("solver input validation") {
  const auto zero = [](const Vector&) { return 0.0; };
  const GraphPatch tiny = ball_problem(Vector::Zero(2), 0.15, 0.1, GraphDirection::Vertical, zero);
  CHECK_THROWS_AS(solve_vertical(tiny), std::invalid_argument);
  const GraphPatch side = ball_problem(Vector::Zero(2), 1.0, 0.1, GraphDirection::Sideways, zero);
  CHECK_THROWS_AS(solve_vertical(side), std::invalid_argument);
  CHECK_THROWS_AS(construct_cap_data(0.0, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(construct_cap_data(std::numbers::pi / 2, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("translators in closed form solve their own Dirichlet problem") {
  const auto gr = [](const Vector& y) { return -std::log(std::cos(y(0))); };
  const GraphPatch problem = ball_problem(Vector::Zero(2), 1.0, 0.05, GraphDirection::Vertical, gr);
  const auto [sol, report] = solve_vertical(problem);
  REQUIRE(report.converged);
  CHECK(max_error(sol, gr) <= 5e-3);

  const auto flat = [](const Vector& y) { return 0.3 + 0.0 * y(0); };
  const GraphPatch wall = ball_problem(Vector::Zero(2), 1.0, 0.1, GraphDirection::Sideways, flat);
  const auto [plane, side_report] = solve_side(wall);
  REQUIRE(side_report.converged);
  CHECK(max_error(plane, flat) <= 1e-12);
  CHECK(side_report.max_gradient <= 1e-12);
}

TEST_CASE("translator operator and harmonic extension") {
  const GridSpec g = GridSpec::box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0), 0.05);
  const Vector res = translator_operator(grim_reaper(2, g));
  double worst = 0.0;
  for (Index i = 0; i < res.size(); ++i) {
    if (!std::isnan(res(i))) worst = std::max(worst, std::abs(res(i)));
  }
  CHECK(worst <= 0.05 * 0.05);
  const auto linear = [](const Vector& y) { return 2.0 * y(0) - y(1) + 1.0; };
  const GraphPatch problem = ball_problem(Vector::Zero(2), 1.0, 0.1, GraphDirection::Vertical, linear);
  const Vector ext = harmonic_extension(problem);
  for (Index node = 0; node < problem.grid.size(); ++node) {
    if (problem.active(node)) CHECK(ext(node) == doctest::Approx(linear(problem.grid.coordinate(node))).epsilon(1e-9));
  }
  const auto coarse = coarsen(problem);
  REQUIRE(coarse);
  CHECK(coarse->grid.spacing == doctest::Approx(0.2));
}

TEST_CASE("cap data geometry") {
  const CapData shallow = construct_cap_data(0.5, -0.05, 0.05);
  CHECK_FALSE(shallow.nongraphical);
  CHECK(shallow.convex);
  CHECK(shallow.problem.direction == GraphDirection::Sideways);
  const CapData deep = construct_cap_data(std::numbers::pi / 4, 1.0, 0.05);
  CHECK(deep.nongraphical);
  CHECK(construct_cap_data(std::numbers::pi / 4, 0.05, 0.05).nongraphical);
  CHECK_FALSE(construct_cap_data(std::numbers::pi / 4, -0.3, 0.05).nongraphical);
}

TEST_CASE("graphical cap converges to the bowl branch") {
  double prev = 0.0;
  for (double h : {0.1, 0.05}) {
    const CapData cap = construct_cap_data(0.6, -0.2, h);
    REQUIRE_FALSE(cap.nongraphical);
    const auto [sol, report] = solve_side(cap.problem);
    REQUIRE(report.converged);
    CHECK_FALSE(report.nonexistence_flag);
    const double err = max_error(sol, cap.exact);
    if (prev > 0.0) CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("nongraphical cap data raise the nonexistence flag") {
  for (double h : {0.1, 0.05}) {
    for (double c : {1.0, 0.3}) {
      const CapData cap = construct_cap_data(std::numbers::pi / 4, c, h);
      REQUIRE(cap.nongraphical);
      const auto [sol, report] = solve_side(cap.problem);
      CHECK_FALSE(report.converged);
      CHECK(report.nonexistence_flag);
      CHECK(report.max_gradient >= 1.5 * report.coarse_gradient);
    }
  }
}

TEST_CASE("comparison ordering of Dirichlet solutions") {
  const Bowl b(2, 4.0);
  const auto lower = [&b](const Vector& y) { return b.height(y.norm()); };
  const auto upper = [&b](const Vector& y) { return b.height(y.norm()) + 0.2 + 0.1 * y(0); };
  const GraphPatch p1 = ball_problem(Vector::Zero(2), 1.5, 0.1, GraphDirection::Vertical, lower);
  const GraphPatch p2 = ball_problem(Vector::Zero(2), 1.5, 0.1, GraphDirection::Vertical, upper);
  const auto [s1, r1] = solve_vertical(p1);
  const auto [s2, r2] = solve_vertical(p2);
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  CHECK((s2.values - s1.values).minCoeff() >= -1e-12);
}
