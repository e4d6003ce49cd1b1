#pragma once

#include "tsol/geometry.hpp"

#include <optional>
#include <span>

namespace tsol {

/// Max and root-mean-square of a pointwise residual over the samples it is defined on.
struct ResidualReport {
  double max_abs = 0.0;
  double l2 = 0.0;  ///< root mean square
  double grid_h = 0.0;
  std::optional<double> convergence_order;
  double curvature_scale = 0.0;  ///< max |H| over the checked samples
  Index count = 0;

  /// max_abs <= factor * h^2 * curvature_scale.
  bool passes(double factor = 10.0) const {
    return max_abs <= factor * grid_h * grid_h * curvature_scale;
  }
};

/// Summary of the finite entries of `residual`; NaN entries are skipped.
ResidualReport summarize(const Vector& residual, double grid_h, double curvature_scale);

/// Smallest observed order log(e_k / e_{k+1}) / log(h_k / h_{k+1}) over consecutive
/// refinements (reports ordered by decreasing h). nullopt when every residual is at
/// round-off level (exact surfaces) or fewer than two reports are given.
std::optional<double> convergence_order(std::span<const ResidualReport> reports);

/// H - <e_{n+1}, nu> at interior samples, NaN elsewhere.
Vector translator_residuals(const SurfaceSample& s);
/// Throws std::invalid_argument on an empty sample.
ResidualReport translator_residual(const SurfaceSample& s);

/// Mean curvature of the sample in the conformal metric exp(2 x_{n+1} / n) delta:
///   H~ = exp(-x_{n+1} / n) (H - <e_{n+1}, nu>).
Vector hi_mean_curvature(const SurfaceSample& s);
ResidualReport hi_minimality_residual(const SurfaceSample& s);

/// The pieces of the Laplacian identity for the locus distance d at one surface point.
struct IdentityTerms {
  double distance = 0.0;
  double gradient_norm = 0.0;      ///< |grad^Sigma d| = |<chi, nu>|
  double normal_gradient = 0.0;    ///< <grad d, nu>
  double tangential_trace = 0.0;   ///< tr_Sigma Hess d, through the Hessian spectrum
  double ambient_laplacian = 0.0;  ///< tr_Sigma Hess d + H <grad d, nu>
  /// (1 - |grad^Sigma d|^2) / d + <grad d, nu> <e_{n+1}, nu>
  double identity_rhs = 0.0;
};

/// Throws std::domain_error on the locus.
IdentityTerms identity_terms(const DistanceField& df, const LocalVector& point,
                             const LocalVector& normal, double mean_curvature);

/// Pointwise |Delta_Sigma d - rhs| with the Laplacian from the chart metric
/// (surface_laplacian) and the right-hand side assembled from the distance field.
/// Throws std::invalid_argument if the patch touches the locus.
ResidualReport main_identity_check(const GraphPatch& patch, const DistanceField& df);

/// Pointwise difference of the chart-metric Laplacian of d and the ambient route
/// tr_Sigma Hess d + H <grad d, nu>.
ResidualReport laplacian_two_route_check(const GraphPatch& patch, const DistanceField& df);

/// Laplacian of the ambient norm |p| on the sample by the ambient route:
///   ((n - 1) + <p/|p|, nu>^2) / |p| + H <p/|p|, nu>.
Vector norm_laplacian(const SurfaceSample& s);

/// Excess of |Delta_Sigma |p|| over n/|p| + 1 and of |H| over 1 (zero when both bounds
/// hold). Throws std::invalid_argument if a sample sits at the origin.
ResidualReport oy_bound_checks(const SurfaceSample& s);

/// Residual of Delta~ x_j + (2/n) g~(grad~ x_{n+1}, grad~ x_j) in the conformal metric,
/// which reduces to exp(-2 x_{n+1} / n) (Delta x_j + <grad x_{n+1}, grad x_j>).
/// `axis` is the 0-based ambient axis j; axis n (the translation axis) is rejected.
ResidualReport killing_coordinate_check(const GraphPatch& patch, Index axis);

}  // namespace tsol
