#pragma once

#include "tsol/geometry.hpp"

#include <functional>
#include <vector>

namespace tsol {

struct FlowSnapshot {
  double time = 0.0;
  GraphPatch patch;
};

struct FlowTrajectory {
  std::vector<FlowSnapshot> snapshots;  ///< strictly increasing times, first at t = 0
  double dt = 0.0;

  double spacing() const { return snapshots.empty() ? 0.0 : snapshots.front().patch.grid.spacing; }
};

enum class FlowScheme {
  Explicit,      ///< forward Euler, dt <= h^2 / (2 (n + 1))
  SemiImplicit,  ///< coefficients lagged, linear system per step; no step restriction
};

struct FlowOptions {
  FlowScheme scheme = FlowScheme::Explicit;
  int snapshots = 10;  ///< number of recorded intervals, evenly spaced in steps
  /// Dirichlet values u(y, t) on the boundary nodes; empty keeps the initial values.
  std::function<double(const Vector& y, double t)> boundary;
};

/// Largest explicit step h^2 / (2 (n + 1)) on a grid of dimension n.
double cfl_limit(const GridSpec& grid);

/// Graph mean curvature flow u_t = Delta u - u_i u_j u_ij / (1 + |Du|^2) on the vertical
/// graph `initial`, interior = active nodes with a full stencil. Throws
/// std::invalid_argument on dt violating the CFL bound (explicit scheme), T <= 0 or a
/// sideways patch; std::runtime_error when values exceed 1e12.
FlowTrajectory flow_graph_mcf(const GraphPatch& initial, double T, double dt,
                              const FlowOptions& options = {});

/// ||u(., T) - u(., 0) - T||_inf over the active nodes of the last snapshot.
double translation_defect(const FlowTrajectory& flow);

/// Round sphere in R^{n+1} shrinking by r(t)^2 = r0^2 - 2 n t.
struct SphereFlow {
  Vector center;
  double r0 = 1.0;
  int n = 2;

  /// Throws std::invalid_argument past the extinction time r0^2 / (2n).
  double radius(double t) const;
};

struct DistanceTrack {
  std::vector<double> times;
  std::vector<double> distances;
  double max_decrease = 0.0;  ///< largest drop between consecutive entries
  double tolerance = 0.0;     ///< C (dt + h^2)
  bool monotone = false;      ///< max_decrease <= tolerance
};

/// Distance between the shrinking sphere and each snapshot of `other`; the sphere
/// must stay disjoint from the graph. Throws std::invalid_argument past extinction.
DistanceTrack comparison_distance_track(const SphereFlow& compact, const FlowTrajectory& other,
                                        double constant = 1.0);
/// Set distance between synchronized snapshots of two graph flows. Throws
/// std::invalid_argument on mismatched times.
DistanceTrack comparison_distance_track(const FlowTrajectory& a, const FlowTrajectory& b,
                                        double constant = 1.0);

}  // namespace tsol
