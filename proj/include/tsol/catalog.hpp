#pragma once

#include "tsol/geometry.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace tsol {

enum class Family { Plane, GrimReaper, TiltedGrimReaper, Bowl, Winglike, MinimalCylinder };

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

struct CatalogSpec {
  Family family = Family::Plane;
  int dim = 2;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
  /// Throws std::invalid_argument on tilt outside [0, pi/2), R <= 0 or h <= 0.
  void validate() const;
};

/// Grim reaper cylinder u(x) = -ln cos(x_1). The grid must stay inside |x_1| < pi/2.
GraphPatch grim_reaper(int n, const GridSpec& grid);

/// Half width pi / (2 cos theta) of the slab carrying the tilted grim reaper.
double tilted_grim_reaper_half_width(double theta);

/// Tilted grim reaper u(x) = sec^2(theta) * (-ln cos(x_1 cos theta)) + x_2 tan(theta).
/// The closed form is checked against the translator residual on the requested grid and
/// rejected (std::runtime_error) if it fails; n >= 2, theta in [0, pi/2).
GraphPatch tilted_grim_reaper(int n, double theta, const GridSpec& grid);

/// Rotationally symmetric entire translator as a radial graph u(r), integrated in r
/// with RK4 from a tip series, evaluated by cubic Hermite interpolation.
class Bowl {
 public:
  Bowl(int n, double r_max, double step = 1e-3);

  int dim() const { return n_; }
  double r_max() const { return r_.back(); }
  double height(double r) const;
  double slope(double r) const;
  /// Inverse of height on [0, r_max]; z must be in [0, height(r_max)].
  double radius_at_height(double z) const;

  /// Tip expansion u = r^2/(2n) + r^4/(4 n^3 (n+2)) + ... and its derivative.
  static double series_height(int n, double r);
  static double series_slope(int n, double r);

 private:
  std::pair<std::size_t, double> locate(double r) const;

  int n_;
  double step_;
  std::vector<double> r_, u_, p_;
};

/// Arclength profile of the bowl: tip series on [0, 10h], then RK4 on
///   r' = cos a, z' = sin a, a' = cos a - (n - 1) sin a / r
/// until r >= r_max. Rejects h > r_max / 100.
RotProfile bowl(int n, double r_max, double h);

/// Vertical graph patch of the bowl over `grid`.
GraphPatch bowl_patch(const Bowl& bowl, const GridSpec& grid);

/// Both wings of the winglike translator with neck radius R, each integrated over
/// arclength s_max from the neck (R, 0) with vertical tangent.
struct Winglike {
  RotProfile upper;  ///< starts with alpha = pi/2 at the neck
  RotProfile lower;  ///< starts with alpha = -pi/2 at the neck
  double neck_radius = 0.0;
  /// Radius of the height minimum on the lower wing (alpha = 0), when reached.
  std::optional<double> r_star;
  std::optional<double> z_min;

  /// One profile running from the far end of the lower wing through the neck to the
  /// far end of the upper wing.
  RotProfile joined() const;
  /// Height of a wing over radius r >= R, by Hermite interpolation in arclength.
  std::optional<double> upper_height(double r) const;
  std::optional<double> lower_height(double r) const;
};

Winglike winglike(int n, double R, double s_max, double h);

/// Vertical hyperplane <x, w> = offset, sampled on a square window of half width
/// `extent` about its foot point. w must be a horizontal unit vector.
SurfaceSample minimal_cylinder(const Vector& w, double offset, double extent, double spacing);

/// The vertical hyperplane x_1 = offset as a sideways graph patch (u = offset).
GraphPatch vertical_plane_patch(double offset, const GridSpec& chart_grid);

// Samplers returning the points of a catalog surface inside the ambient ball of
// radius rho about the origin.
SurfaceSampler bowl_sampler(const Bowl& bowl, Index angular = 128, Index radial = 48);
SurfaceSampler grim_reaper_sampler(int n, double theta = 0.0, Index resolution = 160);
SurfaceSampler vertical_plane_sampler(const Vector& w, double offset, Index resolution = 81);
/// Bowl cap below the height `cap_height`.
SurfaceSampler bowl_cap_sampler(const Bowl& bowl, double cap_height, Index angular = 128,
                                Index radial = 32);
SurfaceSampler winglike_sampler(const Winglike& wing, Index angular = 96);

/// Chart patch of the graph families (Plane as a sideways patch); nullopt for Winglike
/// and MinimalCylinder.
std::optional<GraphPatch> generate_patch(const CatalogSpec& spec);
/// Arclength profile of the rotational families (Bowl up to rmax, Winglike joined);
/// nullopt otherwise.
std::optional<RotProfile> generate_profile(const CatalogSpec& spec);

/// Generic generator behind the CLI: a vertical graph patch for graph families, the
/// rotated profile for Winglike, the plane sample for MinimalCylinder.
SurfaceSample generate_sample(const CatalogSpec& spec);

}  // namespace tsol
