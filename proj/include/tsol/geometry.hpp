#pragma once

#include "tsol/grid.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsol {

/// Orthogonal projection along the translation direction: drops the last coordinate.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> project(
    const Eigen::MatrixBase<Derived>& p) {
  return p.head(p.size() - 1);
}

enum class GraphDirection {
  Vertical,  ///< x_{n+1} = u(x_1, ..., x_n)
  Sideways,  ///< x_1 = u(y), chart coordinates y_1 = x_{n+1}, y_k = x_k for k >= 2
};

/// Function samples on a rectangular grid, read as a graph in R^{n+1}.
struct GraphPatch {
  GridSpec grid;
  Vector values;
  GraphDirection direction = GraphDirection::Vertical;
  /// Nonzero marks nodes outside the domain; empty means every node is active.
  std::vector<char> mask;

  Index domain_dim() const { return grid.dimension(); }
  Index ambient_dim() const { return grid.dimension() + 1; }
  bool active(Index node) const {
    return mask.empty() || mask[static_cast<std::size_t>(node)] == 0;
  }

  /// Ambient axis that chart axis `k` is mapped onto.
  Index ambient_axis(Index k) const;
  /// Ambient axis along which the graph is taken.
  Index graph_axis() const { return direction == GraphDirection::Vertical ? domain_dim() : 0; }

  LocalVector point(Index node) const;
  /// Unit normal of the graph for chart gradient `gradient`: (e_graph - sum u_k e_k) / W.
  LocalVector normal(const LocalVector& gradient) const;
  /// Ambient coordinate `axis` of every node (NaN on masked nodes).
  Vector coordinate_field(Index axis) const;
};

/// Discrete immersed hypersurface: points, unit normals and scalar mean curvature.
///
/// Sign convention: the mean curvature vector is H * nu, so that the translator
/// equation reads H = <e_{n+1}, nu>. For graphs over horizontal domains nu points up.
struct SurfaceSample {
  Matrix points;   ///< one row per sample, n+1 columns
  Matrix normals;  ///< unit normals, same layout as points
  Vector mean_curvature;
  std::vector<char> interior;  ///< full central stencil available
  std::vector<char> boundary;  ///< sample lies on the edge of its chart
  std::vector<Index> node;     ///< originating grid node, -1 when not grid based
  double spacing = 0.0;
  std::string source;

  Index size() const { return points.rows(); }
  Index ambient_dim() const { return points.cols(); }
  Index dim() const { return points.cols() - 1; }
};

/// Produces the sample points (one per row) of a surface lying in the closed ambient
/// ball of the given radius about the origin.
using SurfaceSampler = std::function<Matrix(double radius)>;

/// Arclength-sampled profile (r, z, alpha) of a hypersurface of revolution about the
/// x_{n+1} axis; alpha is the tangent angle, so (r', z') = (cos alpha, sin alpha).
struct ProfilePoint {
  double r = 0.0;
  double z = 0.0;
  double alpha = 0.0;
};

struct RotProfile {
  std::vector<ProfilePoint> samples;
  double step = 0.0;
  int dim = 2;
};

/// First and second chart derivatives of a grid field at one node.
struct Jet {
  LocalVector gradient;
  LocalMatrix hessian;
  bool central = false;
};

/// Second-order jet of `field` at `node`: central differences where the stencil is
/// complete, second-order one-sided differences next to masked nodes.
std::optional<Jet> field_jet(const GraphPatch& patch, const Vector& field, Index node);

/// True when all 3^n neighbours of `node` are active.
bool has_full_stencil(const GraphPatch& patch, Index node);

/// Unit normals and mean curvature of a graph patch by central differences.
/// Throws std::invalid_argument when the patch is thinner than 3 nodes in some axis.
SurfaceSample graph_geometry(const GraphPatch& patch);

/// Intrinsic Laplacian of `field` (sampled on the grid nodes) on the graph, from the
/// chart metric g_ij = delta_ij + u_i u_j:
///   Delta f = g^{ij} f_ij - (g^{ij} u_ij / W^2) <Du, Df>.
/// Nodes without a usable stencil are NaN.
Vector surface_laplacian(const GraphPatch& patch, const Vector& field);

/// Chart-metric inner product g^{ij} a_i b_j of two surface gradients at a node.
double metric_inner_product(const LocalVector& chart_gradient_u, const LocalVector& a,
                            const LocalVector& b);

/// tr(A) restricted to the hyperplane with unit normal mu, computed directly.
template <typename DerivedA, typename DerivedN>
typename DerivedA::Scalar tangential_trace(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedN>& mu) {
  return a.trace() - mu.dot(a * mu);
}

/// tr(A) over the hyperplane with unit normal mu via the spectrum of A:
///   sum_i lambda_i (1 - <v_i, mu>^2).
template <typename DerivedA, typename DerivedN>
typename DerivedA::Scalar spectral_tangential_trace(const Eigen::MatrixBase<DerivedA>& a,
                                                    const Eigen::MatrixBase<DerivedN>& mu) {
  using Scalar = typename DerivedA::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Mat> eig(Mat(a.eval()));
  Scalar total = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    const Scalar c = eig.eigenvectors().col(i).dot(mu);
    total += eig.eigenvalues()(i) * (Scalar(1) - c * c);
  }
  return total;
}

/// Value, gradient, Hessian and Hessian spectrum of the distance to the locus.
template <typename Scalar>
struct DistanceJet {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Scalar distance;
  Vec gradient;
  Mat hessian;
  Vec eigenvalues;  ///< ascending
  Vec chi;          ///< unit eigenvector of the nonzero eigenvalue
};

/// Distance to the codimension-2 locus {x_1 = R/xi, x_2 = 0} used with a wedge in
/// normal form w_1 = (xi, eta, 0, ...), w_2 = (xi, -eta, 0, ...).
template <typename Scalar>
struct BasicDistanceField {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar radius;
  Scalar xi;
  Scalar eta;

  BasicDistanceField(Scalar radius_, Scalar xi_) : radius(radius_), xi(xi_) {
    if (!(radius > 0) || !(xi > 0) || xi > 1) {
      throw std::invalid_argument("distance field needs R > 0 and xi in (0, 1]");
    }
    using std::sqrt;
    eta = sqrt(std::max(Scalar(0), Scalar(1) - xi * xi));
  }

  Scalar locus_offset() const { return radius / xi; }

  template <typename Derived>
  Scalar distance(const Eigen::MatrixBase<Derived>& p) const {
    using std::hypot;
    return hypot(p(0) - locus_offset(), p(1));
  }

  /// Throws std::domain_error on the locus, where d is not differentiable.
  template <typename Derived>
  DistanceJet<Scalar> evaluate(const Eigen::MatrixBase<Derived>& p) const {
    using Mat = typename DistanceJet<Scalar>::Mat;
    const Index dim = p.size();
    const Scalar dx = p(0) - locus_offset();
    const Scalar dy = p(1);
    const Scalar d = distance(p);
    if (!(d > Scalar(0))) {
      throw std::domain_error("distance field is singular on its locus");
    }
    DistanceJet<Scalar> jet;
    jet.distance = d;
    jet.gradient = Vec::Zero(dim);
    jet.gradient(0) = dx / d;
    jet.gradient(1) = dy / d;
    jet.hessian = Mat::Zero(dim, dim);
    jet.hessian(0, 0) = (Scalar(1) - jet.gradient(0) * jet.gradient(0)) / d;
    jet.hessian(1, 1) = (Scalar(1) - jet.gradient(1) * jet.gradient(1)) / d;
    jet.hessian(0, 1) = jet.hessian(1, 0) = -jet.gradient(0) * jet.gradient(1) / d;
    Eigen::SelfAdjointEigenSolver<Mat> eig(jet.hessian, Eigen::EigenvaluesOnly);
    jet.eigenvalues = eig.eigenvalues();
    jet.chi = Vec::Zero(dim);
    jet.chi(0) = -jet.gradient(1);
    jet.chi(1) = jet.gradient(0);
    return jet;
  }
};

using DistanceField = BasicDistanceField<double>;

/// Round sphere S^n of the given radius, with inward normals, so H = n / radius.
/// Supported for n in {1, 2}.
SurfaceSample sample_sphere(int n, double radius, const Vector& center, Index resolution);

/// Mean curvature of a profile by central differences on the sampled positions:
///   H = kappa + (n - 1) sin(alpha) / r.
/// Returns NaN at the two end samples.
struct ProfileCurvature {
  std::vector<double> mean_curvature;
  std::vector<double> alpha;  ///< tangent angle recovered from positions
};
ProfileCurvature profile_curvature(const RotProfile& profile);

/// Rotates a profile into a sample of the hypersurface (n in {2, 3}); curvature
/// comes from profile_curvature, end samples are marked non-interior.
SurfaceSample profile_surface(const RotProfile& profile, Index angular_resolution);

/// Quasi-uniform unit directions in R^m (m in {1, 2, 3}).
std::vector<Vector> unit_directions(Index m, Index count);

}  // namespace tsol
