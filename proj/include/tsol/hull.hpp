#pragma once

#include "tsol/catalog.hpp"
#include "tsol/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tsol {

/// Supporting hyperplane <normal, y> <= offset of a hull, in affine-hull coordinates.
struct HullFacet {
  Vector normal;
  double offset = 0.0;
};

struct ConvexHull {
  Matrix vertices;   ///< one vertex per row, lexicographic order
  Index affine_dim = 0;
  Vector origin;     ///< a point of the affine hull
  Matrix basis;      ///< orthonormal columns spanning the affine hull directions
  std::vector<HullFacet> facets;  ///< in basis coordinates

  /// Ambient unit normals of the facets; for lower-dimensional hulls the normals of
  /// the affine hull are included with both signs.
  std::vector<Vector> outward_normals() const;
  /// Distance-tolerant membership test.
  bool contains(const Vector& x, double tol) const;
};

/// Hull of the rows of `points` (1 to 3 columns). Throws std::invalid_argument on an
/// empty input or more than 3 columns.
ConvexHull convex_hull(const Matrix& points);

/// (min <p, u>, max <p, u>) over the rows. Throws std::invalid_argument on empty input.
std::pair<double, double> support_width(const Matrix& points, const Vector& u);

enum class HullVariant { FullSpace, Halfspace, Slab, Hyperplane, Compact, Indeterminate };

std::string_view variant_name(HullVariant v);

struct HullCase {
  HullVariant variant = HullVariant::Indeterminate;
  double width = 0.0;  ///< slab width
  Vector normal;       ///< slab / hyperplane normal, or outward normal of a halfspace

  /// `case=<variant> width=<w> normal=<a,b,...>`
  std::string describe() const;
};

struct SamplingProtocol {
  double rho0 = 1.0;
  int levels = 6;  ///< K
  Index directions = 64;
  std::uint64_t seed = 0;  ///< used for direction sets in projected dimension > 3

  std::vector<double> radii() const;
  std::vector<Vector> direction_set(Index m) const;
};

/// Five-way classification of conv(pi(Sigma)) from samples on growing balls.
/// `dim` is n, the dimension of the projected space.
HullCase classify_hull(const SurfaceSampler& sampler, Index dim, const SamplingProtocol& protocol);

struct CompactnessReport {
  bool compact = false;             ///< max |p| stabilizes
  bool bounded_height = false;      ///< sup x_{n+1} stabilizes
  bool bounded_projection = false;  ///< max |pi(p)| stabilizes
  double max_norm = 0.0;
  double sup_height = 0.0;
  double max_projection = 0.0;

  bool agree() const {
    return compact == bounded_height && bounded_height == bounded_projection;
  }
};

CompactnessReport compactness_probe(const SurfaceSampler& sampler,
                                    const SamplingProtocol& protocol);

struct BoundaryHullReport {
  bool holds = false;
  double max_outside = 0.0;  ///< largest distance of a projected point outside conv(pi(boundary))
  double height_gap = 0.0;   ///< max interior height minus max boundary height (>= 0)
};

/// Checks pi(p) in conv(pi(boundary)) and x_{n+1}(p) <= max over the boundary, both
/// with tolerance h = s.spacing. Throws std::invalid_argument on an empty boundary.
BoundaryHullReport boundary_hull_bound_check(const SurfaceSample& s);

/// A one-parameter barrier family: signed gap from a point to the barrier at a
/// parameter value (positive while separated, nonpositive on contact or overlap).
struct BarrierFamily {
  std::function<double(double param, const Vector& point)> gap;
  std::string name;
};

/// Rotational barrier given by the wings, shifted vertically by `shift`:
/// gap = vertical distance to the nearest wing, negative between the wings; inside the
/// neck, distance to the neck sphere.
double winglike_gap(const Winglike& wing, double shift, const Vector& point);

/// W_R + s e_{n+1}, normalized so that the lowest point sits at height s.
BarrierFamily winglike_translates(const Winglike& wing);
/// W_{r, 0}: neck radius r as the parameter, lowest point at height 0.
BarrierFamily neck_growth(int n, double s_max, double h);

struct SweepResult {
  std::optional<double> param;  ///< first-touch parameter
  Index row = -1;               ///< touching sample
  bool interior_touch = false;  ///< touching sample is not a boundary sample
};

/// Walks `params` in order and reports the first parameter at which some sample comes
/// within s.spacing of the barrier, refined by bisection. Throws std::invalid_argument
/// when the minimal gap grows before contact (non-monotone family).
SweepResult tangency_sweep(const SurfaceSample& s, const BarrierFamily& family,
                           const std::vector<double>& params);

}  // namespace tsol
