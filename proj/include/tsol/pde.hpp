#pragma once

#include "tsol/catalog.hpp"
#include "tsol/geometry.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace tsol {

struct SolverOptions {
  double tolerance = 1e-10;  ///< max |F| / W^3 over the interior
  int max_iterations = 80;
  int max_halvings = 30;
  double gradient_limit = 1e6;
  /// Initial number of stages in the speed continuation tau = 0 -> 1 (tau scales the
  /// right-hand side; tau = 0 is the minimal surface equation). Failed stages are split.
  int continuation_steps = 1;
  double min_stage = 1.0 / 1024.0;
  /// Companion solve on the every-other-node subgrid (spacing 2h). A converged solution
  /// whose max |Du| grows by at least `growth_ratio` from 2h to h, and exceeds 1, is
  /// rejected as a boundary layer: the discrete data are not attained in the limit.
  bool refinement_check = true;
  double growth_ratio = 1.5;
};

struct SolverReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  double max_gradient = 0.0;
  /// Numerical evidence only: set whenever the solve fails (blow-up, exhausted damping or
  /// gradient growth under refinement).
  bool nonexistence_flag = false;
  /// max |Du| of the companion 2h solve (0 when not run).
  double coarse_gradient = 0.0;
  std::string message;
};

/// Dirichlet problem on the active nodes of a masked grid: nodes whose 3^n stencil is
/// complete are unknowns, the remaining active nodes keep their values as boundary data.
/// Throws std::invalid_argument if no interior node exists or the patch direction differs.
std::pair<GraphPatch, SolverReport> solve_vertical(const GraphPatch& problem,
                                                   const SolverOptions& options = {});
/// Sideways graph x_1 = u(y) with y_1 = x_{n+1}:
///   div(Du / W) = -u_{y_1} / W   (normal oriented as (e_1 - Du) / W).
std::pair<GraphPatch, SolverReport> solve_side(const GraphPatch& problem,
                                               const SolverOptions& options = {});

/// Nodes of a square grid inside the closed ball |y - center| <= radius; everything else
/// masked. Values are `boundary(y)` at every active node.
GraphPatch ball_problem(const Vector& center, double radius, double spacing,
                        GraphDirection direction, const std::function<double(const Vector&)>& boundary);

/// Every-other-node subgrid with the same mask and values (the problem must carry data at
/// every active node, as ball_problem and construct_cap_data do); nullopt when the subgrid has
/// no interior node.
std::optional<GraphPatch> coarsen(const GraphPatch& problem);

/// Harmonic extension of the boundary values into the interior nodes.
Vector harmonic_extension(const GraphPatch& problem);

/// Residual F / W^3 of the translator equation at interior nodes (NaN elsewhere), with
///   F = (1 + |Du|^2)(Delta u - s) - Du^T D^2u Du,  s = 1 (vertical) or -u_{y_1} (sideways).
Vector translator_operator(const GraphPatch& patch);

/// Cut of the bowl by the plane P: x_{n+1} = c + x_1 tan(theta), projected onto
/// Q = {x_1 = 0} (coordinates y_1 = x_{n+1}, y_2 = x_2), n = 2.
struct CapData {
  GraphPatch problem;       ///< sideways problem on Omega with phi from P at every node
  bool nongraphical = false;  ///< some line parallel to e_1 meets the cap twice
  bool convex = false;      ///< Omega's grid nodes fill their hull
  double theta = 0.0;
  double height = 0.0;
  /// Graphical branch x_1 = sqrt(r(y_1)^2 - y_2^2) of the bowl, when the cap is graphical.
  std::function<double(const Vector&)> exact;
};

/// Throws std::invalid_argument for theta outside (0, pi/2).
CapData construct_cap_data(double theta, double c, double spacing);

}  // namespace tsol
