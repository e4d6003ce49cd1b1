#pragma once

#include "tsol/geometry.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace tsol {

/// {x : <x - b, w> >= 0} with unit w.
struct Halfspace {
  Vector b;
  Vector w;

  Halfspace(Vector b_, Vector w_);
  bool contains(const Vector& x, double tol = 0.0) const { return (x - b).dot(w) >= -tol; }
};

constexpr double kAngleTol = 1e-12;

bool is_vertical(const Halfspace& h);
bool is_vertical(const Vector& w);
/// Neither parallel nor antiparallel: |<w_1, w_2>| < 1 - 1e-12.
bool is_transverse(const Halfspace& h1, const Halfspace& h2);
bool is_transverse(const Vector& w1, const Vector& w2);

struct WedgeNormalForm {
  double xi = 0.0;
  double eta = 0.0;
};

/// x -> Q (x - b), with Q orthogonal and fixing e_{n+1}.
struct RigidMotion {
  Matrix rotation;
  Vector shift;

  Vector apply(const Vector& x) const { return rotation * (x - shift); }
  Vector apply_direction(const Vector& v) const { return rotation * v; }
  Vector inverse(const Vector& y) const { return rotation.transpose() * y + shift; }
  Vector inverse_direction(const Vector& v) const { return rotation.transpose() * v; }
  /// Applies the motion to every row of a point matrix.
  Matrix apply_rows(const Matrix& points) const;
};

/// Carries a transverse pair of vertical halfspaces to w_1 = (xi, eta, 0, ...),
/// w_2 = (xi, -eta, 0, ...) with a common boundary point at the origin.
/// Throws std::invalid_argument for non-vertical or non-transverse input.
std::pair<WedgeNormalForm, RigidMotion> normalize_pair(const Halfspace& h1, const Halfspace& h2);

enum class WedgeRule {
  BothRising,      ///< both normals point strictly up: a bowl fits
  OneVertical,     ///< one rising, one vertical: a tilted grim reaper fits
  ParallelPlanes,  ///< both vertical and parallel: a vertical plane fits
  BiHalfspace,     ///< both vertical and transverse: nothing fits
  Descending,      ///< some normal points strictly down: sphere comparison rules it out
};

struct WedgeVerdict {
  bool exists = false;
  WedgeRule rule = WedgeRule::BiHalfspace;

  /// Witness family for Exists, rule name for None.
  std::string_view label() const;
};

/// Whether some proper translator lies in H_{(b_1, w_1)} and H_{(b_2, w_2)}.
/// Sign tests on <w_i, e_{n+1}> use the tolerance 1e-12; near-parallel resolves to parallel.
WedgeVerdict wedge_existence(const Vector& w1, const Vector& w2);

/// Row of the first sample violating some halfspace, nullopt when all are satisfied.
std::optional<Index> containment_check(const SurfaceSample& s,
                                       const std::vector<Halfspace>& halfspaces,
                                       double tol = 0.0);

/// chi_l(x) = psi(|x| / l) with psi(t) = g(t - 1) / (g(t - 1) + g(2 - t)), g(s) = exp(-1/s).
struct Cutoff {
  double ell;
  double rho;
  double sup_f;  ///< M

  Cutoff(double ell_, double rho_, double sup_f_);

  static double psi(double t);
  static double psi_prime(double t);
  static double psi_second(double t);
  /// sup |psi'| and sup |psi''| by dense sampling on [1, 2].
  static double psi_prime_sup();
  static double psi_second_sup();

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  double laplacian(const Vector& x) const;
  /// C / l with C = sup |psi'|.
  double gradient_bound() const;
  /// (sup |psi''| + (m - 1) sup |psi'|) / l^2 in R^m.
  double laplacian_bound(Index m) const;
};

enum class ProbeRegion { InV, Outside };

struct OYProbe {
  LocalVector point;
  Index row = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double laplacian = 0.0;
  ProbeRegion region = ProbeRegion::Outside;
};

struct OYProbeResult {
  std::vector<OYProbe> rows;  ///< top decile by f, ties broken by sample row
  double sup_f = 0.0;
  double threshold = 0.0;  ///< xi / (2R)
  bool contradiction = false;
};

/// Region V_R of a wedge in normal form: inside both halfspaces, on the apex side of
/// the tangency chord x_1 = R eta^2 / xi, and outside the cylinder d_R <= R.
bool in_region(const WedgeNormalForm& nf, double R, const Vector& x);

/// Ranks the samples (already in normal-form coordinates) by f (or f + M chi_l with a
/// cutoff) and evaluates |grad^Sigma f| and Delta_Sigma f at the top decile.
/// The indicator fires when the near-maximizers in V_R with |grad^Sigma f| <= 0.1
/// exist and all satisfy Delta_Sigma f >= xi / (2R).
/// Throws std::invalid_argument when no sample lies in V_R.
OYProbeResult oy_probe(const SurfaceSample& s, const WedgeNormalForm& nf, double R,
                       const std::optional<Cutoff>& cutoff = std::nullopt);

}  // namespace tsol
