#include "tsol/catalog.hpp"

#include "tsol/verify.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tsol {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void require_grid_dim(int n, const GridSpec& grid) {
  if (grid.dimension() != n) throw std::invalid_argument("grid dimension must equal n");
}

struct WingState {
  double r, z, alpha;
};

WingState wing_rhs(int n, const WingState& s) {
  return {std::cos(s.alpha), std::sin(s.alpha),
          std::cos(s.alpha) - (n - 1) * std::sin(s.alpha) / s.r};
}

WingState rk4_step(int n, const WingState& s, double h) {
  const auto add = [](const WingState& a, const WingState& b, double t) {
    return WingState{a.r + t * b.r, a.z + t * b.z, a.alpha + t * b.alpha};
  };
  const WingState k1 = wing_rhs(n, s);
  const WingState k2 = wing_rhs(n, add(s, k1, h / 2));
  const WingState k3 = wing_rhs(n, add(s, k2, h / 2));
  const WingState k4 = wing_rhs(n, add(s, k3, h));
  return {s.r + h / 6 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r),
          s.z + h / 6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z),
          s.alpha + h / 6 * (k1.alpha + 2 * k2.alpha + 2 * k3.alpha + k4.alpha)};
}

RotProfile integrate_wing(int n, const WingState& start, double s_max, double h) {
  RotProfile profile;
  profile.step = h;
  profile.dim = n;
  const auto steps = static_cast<std::size_t>(std::ceil(s_max / h));
  profile.samples.reserve(steps + 1);
  WingState s = start;
  profile.samples.push_back({s.r, s.z, s.alpha});
  for (std::size_t k = 0; k < steps; ++k) {
    s = rk4_step(n, s, h);
    if (!(s.r > 0.0)) throw std::logic_error("rotation profile left the domain r > 0");
    profile.samples.push_back({s.r, s.z, s.alpha});
  }
  return profile;
}

double hermite(double y0, double y1, double d0, double d1, double h, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

std::optional<double> wing_height(const RotProfile& wing, double r) {
  const auto& s = wing.samples;
  if (s.empty() || r < s.front().r || r > s.back().r) return std::nullopt;
  const auto it = std::lower_bound(s.begin(), s.end(), r,
                                   [](const ProfilePoint& p, double v) { return p.r < v; });
  if (it == s.begin()) return it->z;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double h = wing.step;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double rm = hermite(a.r, b.r, std::cos(a.alpha), std::cos(b.alpha), h, mid);
    (rm < r ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return hermite(a.z, b.z, std::sin(a.alpha), std::sin(b.alpha), h, t);
}

/// Orthonormal basis of the complement of unit vector w, as columns.
Matrix complement_basis(const Vector& w) {
  const Eigen::HouseholderQR<Matrix> qr{Matrix(w)};
  const Matrix q = qr.householderQ() * Matrix::Identity(w.size(), w.size());
  return q.rightCols(w.size() - 1);
}

Matrix collect_rows(const std::vector<LocalVector>& rows, Index cols) {
  Matrix m(static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Index>(i)) = rows[i].transpose();
  return m;
}

/// Radius at which the ambient ball of radius rho meets the radial graph height(r).
template <typename Height>
double ball_radius_limit(double rho, double r_hi, const Height& height) {
  const auto inside = [&](double r) { return r * r + height(r) * height(r) <= rho * rho; };
  if (inside(r_hi)) return r_hi;
  double lo = 0.0, hi = r_hi;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Plane: return "plane";
    case Family::GrimReaper: return "grim_reaper";
    case Family::TiltedGrimReaper: return "tilted_grim_reaper";
    case Family::Bowl: return "bowl";
    case Family::Winglike: return "winglike";
    case Family::MinimalCylinder: return "minimal_cylinder";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::Plane, Family::GrimReaper, Family::TiltedGrimReaper, Family::Bowl,
                   Family::Winglike, Family::MinimalCylinder}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

double CatalogSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void CatalogSpec::validate() const {
  const double theta = param("theta", 0.0);
  if (!(theta >= 0.0 && theta < kHalfPi)) throw std::invalid_argument("tilt must lie in [0, pi/2)");
  if (!(param("R", 1.0) > 0.0)) throw std::invalid_argument("neck radius must be positive");
  if (!(param("h", 0.05) > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (dim < 1 || dim > kMaxGridDim) throw std::invalid_argument("n must be 1, 2 or 3");
}

GraphPatch grim_reaper(int n, const GridSpec& grid) {
  require_grid_dim(n, grid);
  GraphPatch patch{grid, Vector(grid.size()), GraphDirection::Vertical, {}};
  for (Index node = 0; node < grid.size(); ++node) {
    const double x = grid.coordinate(node)(0);
    if (!(std::abs(x) < kHalfPi)) throw std::invalid_argument("grid touches |x_1| = pi/2");
    patch.values(node) = -std::log(std::cos(x));
  }
  return patch;
}

double tilted_grim_reaper_half_width(double theta) { return kHalfPi / std::cos(theta); }

GraphPatch tilted_grim_reaper(int n, double theta, const GridSpec& grid) {
  if (!(theta >= 0.0 && theta < kHalfPi)) throw std::invalid_argument("tilt must lie in [0, pi/2)");
  if (theta == 0.0) return grim_reaper(n, grid);
  if (n < 2) throw std::invalid_argument("a tilted grim reaper needs n >= 2");
  require_grid_dim(n, grid);
  const double c = std::cos(theta);
  const double t = std::tan(theta);
  GraphPatch patch{grid, Vector(grid.size()), GraphDirection::Vertical, {}};
  for (Index node = 0; node < grid.size(); ++node) {
    const Vector x = grid.coordinate(node);
    if (!(std::abs(x(0) * c) < kHalfPi)) {
      throw std::invalid_argument("grid leaves the tilted grim reaper slab");
    }
    patch.values(node) = -std::log(std::cos(x(0) * c)) / (c * c) + x(1) * t;
  }
  const ResidualReport gate = translator_residual(graph_geometry(patch));
  if (!gate.passes()) {
    throw std::runtime_error("tilted grim reaper candidate failed the translator residual gate");
  }
  return patch;
}

double Bowl::series_height(int n, double r) {
  const double nn = n;
  const double r2 = r * r;
  const double a = 1.0 / (nn * nn * nn * (nn + 2));
  const double b = -(nn - 3) / (std::pow(nn, 5) * (nn + 2) * (nn + 4));
  const double c = (nn * nn * nn - 6 * nn * nn - 8 * nn + 30) /
                   (std::pow(nn, 7) * (nn + 2) * (nn + 2) * (nn + 4) * (nn + 6));
  return r2 / (2 * nn) + a * r2 * r2 / 4 + b * r2 * r2 * r2 / 6 + c * r2 * r2 * r2 * r2 / 8;
}

double Bowl::series_slope(int n, double r) {
  const double nn = n;
  const double r2 = r * r;
  const double a = 1.0 / (nn * nn * nn * (nn + 2));
  const double b = -(nn - 3) / (std::pow(nn, 5) * (nn + 2) * (nn + 4));
  const double c = (nn * nn * nn - 6 * nn * nn - 8 * nn + 30) /
                   (std::pow(nn, 7) * (nn + 2) * (nn + 2) * (nn + 4) * (nn + 6));
  return r / nn + a * r * r2 + b * r * r2 * r2 + c * r * r2 * r2 * r2;
}

Bowl::Bowl(int n, double r_max, double step) : n_(n), step_(step) {
  if (n < 2) throw std::invalid_argument("the bowl needs n >= 2");
  if (!(r_max > 0.0) || !(step > 0.0)) throw std::invalid_argument("bowl extent must be positive");
  const double r0 = std::min(0.05, r_max);
  const auto rhs = [n](double r, double p) { return (1 + p * p) * (1 - (n - 1) * p / r); };
  double r = r0;
  double u = series_height(n, r0);
  double p = series_slope(n, r0);
  r_.push_back(r);
  u_.push_back(u);
  p_.push_back(p);
  while (r < r_max) {
    const double h = std::min(step_, r_max - r);
    if (h <= 1e-14) break;
    const double k1p = rhs(r, p), k1u = p;
    const double k2p = rhs(r + h / 2, p + h / 2 * k1p), k2u = p + h / 2 * k1p;
    const double k3p = rhs(r + h / 2, p + h / 2 * k2p), k3u = p + h / 2 * k2p;
    const double k4p = rhs(r + h, p + h * k3p), k4u = p + h * k3p;
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    p += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    r += h;
    r_.push_back(r);
    u_.push_back(u);
    p_.push_back(p);
  }
}

std::pair<std::size_t, double> Bowl::locate(double r) const {
  if (r > r_.back() + 1e-12) throw std::out_of_range("radius beyond the integrated bowl");
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t k = it == r_.begin() ? 0 : static_cast<std::size_t>(it - r_.begin()) - 1;
  k = std::min(k, r_.size() - 2);
  return {k, (r - r_[k]) / (r_[k + 1] - r_[k])};
}

double Bowl::height(double r) const {
  r = std::abs(r);
  if (r <= r_.front() || r_.size() < 2) return series_height(n_, r);
  const auto [k, t] = locate(r);
  const double h = r_[k + 1] - r_[k];
  return hermite(u_[k], u_[k + 1], p_[k], p_[k + 1], h, t);
}

double Bowl::slope(double r) const {
  const double sign = r < 0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (r <= r_.front() || r_.size() < 2) return sign * series_slope(n_, r);
  const auto [k, t] = locate(r);
  const double h = r_[k + 1] - r_[k];
  const auto dp = [this](double rr, double p) { return (1 + p * p) * (1 - (n_ - 1) * p / rr); };
  return sign * hermite(p_[k], p_[k + 1], dp(r_[k], p_[k]), dp(r_[k + 1], p_[k + 1]), h, t);
}

double Bowl::radius_at_height(double z) const {
  if (z < 0.0 || z > u_.back() + 1e-12) throw std::out_of_range("height outside the integrated bowl");
  double lo = 0.0, hi = r_.back();
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (height(mid) < z ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RotProfile bowl(int n, double r_max, double h) {
  if (n < 2) throw std::invalid_argument("the bowl needs n >= 2");
  if (!(r_max > 0.0) || !(h > 0.0)) throw std::invalid_argument("bowl extent and step must be positive");
  if (h > r_max / 100.0) throw std::invalid_argument("bowl step too large (h > r_max / 100)");
  RotProfile profile;
  profile.step = h;
  profile.dim = n;
  for (int k = 0; k <= 10; ++k) {
    const double r = k * h;
    profile.samples.push_back(
        {r, Bowl::series_height(n, r), std::atan(Bowl::series_slope(n, r))});
  }
  WingState s{profile.samples.back().r, profile.samples.back().z, profile.samples.back().alpha};
  while (s.r < r_max) {
    s = rk4_step(n, s, h);
    profile.samples.push_back({s.r, s.z, s.alpha});
  }
  return profile;
}

GraphPatch bowl_patch(const Bowl& b, const GridSpec& grid) {
  require_grid_dim(b.dim(), grid);
  GraphPatch patch{grid, Vector(grid.size()), GraphDirection::Vertical, {}};
  for (Index node = 0; node < grid.size(); ++node) {
    patch.values(node) = b.height(grid.coordinate(node).norm());
  }
  return patch;
}

Winglike winglike(int n, double R, double s_max, double h) {
  if (n < 2) throw std::invalid_argument("winglike translators need n >= 2");
  if (!(R > 0.0) || !(s_max > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("winglike parameters must be positive");
  }
  Winglike w;
  w.neck_radius = R;
  w.upper = integrate_wing(n, {R, 0.0, kHalfPi}, s_max, h);
  w.lower = integrate_wing(n, {R, 0.0, -kHalfPi}, s_max, h);
  const auto& low = w.lower.samples;
  for (std::size_t k = 0; k + 1 < low.size(); ++k) {
    if (low[k].alpha < 0.0 && low[k + 1].alpha >= 0.0) {
      const WingState base{low[k].r, low[k].z, low[k].alpha};
      double lo = 0.0, hi = h;
      for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (rk4_step(n, base, mid).alpha < 0.0 ? lo : hi) = mid;
      }
      const WingState hit = rk4_step(n, base, 0.5 * (lo + hi));
      w.r_star = hit.r;
      w.z_min = hit.z;
      break;
    }
  }
  return w;
}

RotProfile Winglike::joined() const {
  RotProfile out;
  out.step = upper.step;
  out.dim = upper.dim;
  for (std::size_t k = lower.samples.size(); k-- > 1;) {
    ProfilePoint p = lower.samples[k];
    p.alpha = std::remainder(p.alpha + std::numbers::pi, 2.0 * std::numbers::pi);
    out.samples.push_back(p);
  }
  out.samples.insert(out.samples.end(), upper.samples.begin(), upper.samples.end());
  return out;
}

std::optional<double> Winglike::upper_height(double r) const { return wing_height(upper, r); }
std::optional<double> Winglike::lower_height(double r) const { return wing_height(lower, r); }

SurfaceSample minimal_cylinder(const Vector& w, double offset, double extent, double spacing) {
  const Index amb = w.size();
  if (amb < 2 || amb > kMaxGridDim + 1) throw std::invalid_argument("ambient dimension must be 2..4");
  if (std::abs(w(amb - 1)) > 1e-12) throw std::invalid_argument("plane normal must be horizontal");
  if (std::abs(w.norm() - 1.0) > 1e-12) throw std::invalid_argument("plane normal must be a unit vector");
  const Matrix basis = complement_basis(w);
  const Index n = amb - 1;
  const GridSpec grid = GridSpec::box(Vector::Constant(n, -extent), Vector::Constant(n, extent), spacing);
  GraphPatch chart{grid, Vector::Zero(grid.size()), GraphDirection::Vertical, {}};
  SurfaceSample s;
  s.points.resize(grid.size(), amb);
  s.normals.resize(grid.size(), amb);
  s.mean_curvature = Vector::Zero(grid.size());
  s.spacing = spacing;
  s.source = "minimal-cylinder";
  for (Index node = 0; node < grid.size(); ++node) {
    s.points.row(node) = (offset * w + basis * grid.coordinate(node)).transpose();
    s.normals.row(node) = w.transpose();
    s.interior.push_back(1);
    bool edge = false;
    for (Index a = 0; a < n; ++a) {
      edge = edge || !grid.shifted(node, a, 1) || !grid.shifted(node, a, -1);
    }
    s.boundary.push_back(edge ? 1 : 0);
    s.node.push_back(node);
  }
  return s;
}

GraphPatch vertical_plane_patch(double offset, const GridSpec& chart_grid) {
  return GraphPatch{chart_grid, Vector::Constant(chart_grid.size(), offset),
                    GraphDirection::Sideways, {}};
}

SurfaceSampler bowl_sampler(const Bowl& b, Index angular, Index radial) {
  const auto dirs = unit_directions(b.dim(), angular);
  return [b, dirs, radial](double rho) {
    const double r_lim =
        ball_radius_limit(rho, b.r_max(), [&](double r) { return b.height(r); });
    std::vector<LocalVector> pts;
    LocalVector p = LocalVector::Zero(b.dim() + 1);
    pts.push_back(p);
    for (Index i = 1; i <= radial; ++i) {
      const double r = r_lim * static_cast<double>(i) / static_cast<double>(radial);
      for (const Vector& omega : dirs) {
        p.head(b.dim()) = r * omega;
        p(b.dim()) = b.height(r);
        pts.push_back(p);
      }
    }
    return collect_rows(pts, b.dim() + 1);
  };
}

SurfaceSampler grim_reaper_sampler(int n, double theta, Index resolution) {
  if (n != 2 && n != 3) throw std::invalid_argument("grim reaper sampler supports n in {2, 3}");
  if (!(theta >= 0.0 && theta < kHalfPi)) throw std::invalid_argument("tilt must lie in [0, pi/2)");
  const Index cross = n == 2 ? resolution : resolution / 4 + 1;
  return [n, theta, resolution, cross](double rho) {
    const double c = std::cos(theta);
    const double t_max = rho * (1.0 + std::tan(theta)) * c * c;
    std::vector<LocalVector> pts;
    LocalVector p(n + 1);
    const Index side = cross | 1;
    for (Index i = 0; i <= resolution; ++i) {
      const double g = t_max * static_cast<double>(i) / static_cast<double>(resolution);
      const double x1 = std::acos(std::exp(-g)) / c;
      for (double sign : {1.0, -1.0}) {
        if (i == 0 && sign < 0) continue;
        for (Index j = 0; j < side; ++j) {
          for (Index k = 0; k < (n == 3 ? side : 1); ++k) {
            const double x2 = -rho + 2.0 * rho * static_cast<double>(j) / static_cast<double>(side - 1);
            p(0) = sign * x1;
            p(1) = x2;
            if (n == 3) p(2) = -rho + 2.0 * rho * static_cast<double>(k) / static_cast<double>(side - 1);
            p(n) = g / (c * c) + x2 * std::tan(theta);
            if (p.norm() <= rho) pts.push_back(p);
          }
        }
      }
    }
    return collect_rows(pts, n + 1);
  };
}

SurfaceSampler vertical_plane_sampler(const Vector& w, double offset, Index resolution) {
  if (std::abs(w(w.size() - 1)) > 1e-12) throw std::invalid_argument("plane normal must be horizontal");
  const Matrix basis = complement_basis(w);
  return [w, offset, resolution, basis](double rho) {
    const Index n = w.size() - 1;
    const GridSpec grid(Vector::Constant(n, -rho), 2.0 * rho / static_cast<double>(resolution - 1),
                        std::vector<Index>(static_cast<std::size_t>(n), resolution));
    std::vector<LocalVector> pts;
    for (Index node = 0; node < grid.size(); ++node) {
      const LocalVector p = offset * w + basis * grid.coordinate(node);
      if (p.norm() <= rho) pts.push_back(p);
    }
    return collect_rows(pts, n + 1);
  };
}

SurfaceSampler bowl_cap_sampler(const Bowl& b, double cap_height, Index angular, Index radial) {
  const auto dirs = unit_directions(b.dim(), angular);
  const double r_cap = b.radius_at_height(cap_height);
  return [b, dirs, radial, r_cap](double rho) {
    std::vector<LocalVector> pts;
    LocalVector p = LocalVector::Zero(b.dim() + 1);
    if (p.norm() <= rho) pts.push_back(p);
    for (Index i = 1; i <= radial; ++i) {
      const double r = r_cap * static_cast<double>(i) / static_cast<double>(radial);
      for (const Vector& omega : dirs) {
        p.head(b.dim()) = r * omega;
        p(b.dim()) = b.height(r);
        if (p.norm() <= rho) pts.push_back(p);
      }
    }
    return collect_rows(pts, b.dim() + 1);
  };
}

SurfaceSampler winglike_sampler(const Winglike& wing, Index angular) {
  const int n = wing.upper.dim;
  const auto dirs = unit_directions(n, angular);
  return [wing, dirs, n](double rho) {
    std::vector<LocalVector> pts;
    LocalVector p(n + 1);
    const double min_gap = rho / 200.0;
    for (const RotProfile* prof : {&wing.upper, &wing.lower}) {
      double last_s = -1e300;
      for (std::size_t k = 0; k < prof->samples.size(); ++k) {
        const auto& q = prof->samples[k];
        const double s = static_cast<double>(k) * prof->step;
        if (std::hypot(q.r, q.z) > rho) continue;
        if (s - last_s < min_gap) continue;
        last_s = s;
        for (const Vector& omega : dirs) {
          p.head(n) = q.r * omega;
          p(n) = q.z;
          if (p.norm() <= rho) pts.push_back(p);
        }
      }
    }
    return collect_rows(pts, n + 1);
  };
}

std::optional<GraphPatch> generate_patch(const CatalogSpec& spec) {
  spec.validate();
  const int n = spec.dim;
  const double h = spec.param("h", 0.05);
  const auto box = [&](double half) {
    return GridSpec::box(Vector::Constant(n, -half), Vector::Constant(n, half), h);
  };
  switch (spec.family) {
    case Family::Plane:
      return vertical_plane_patch(spec.param("offset", 0.0), box(spec.param("extent", 2.0)));
    case Family::GrimReaper:
      return grim_reaper(n, box(spec.param("extent", 1.2)));
    case Family::TiltedGrimReaper: {
      const double theta = spec.param("theta", 0.3);
      const double half = spec.param("extent", 0.8 * tilted_grim_reaper_half_width(theta) * std::cos(theta));
      return tilted_grim_reaper(n, theta, box(half));
    }
    case Family::Bowl: {
      const double rmax = spec.param("rmax", 5.0);
      const Bowl b(n, rmax * std::sqrt(double(n)) + h);
      return bowl_patch(b, box(rmax));
    }
    case Family::Winglike:
    case Family::MinimalCylinder:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<RotProfile> generate_profile(const CatalogSpec& spec) {
  spec.validate();
  const double h = spec.param("h", 0.05);
  if (spec.family == Family::Bowl) return bowl(spec.dim, spec.param("rmax", 5.0), h);
  if (spec.family == Family::Winglike) {
    return winglike(spec.dim, spec.param("R", 1.0), spec.param("smax", 6.0), h).joined();
  }
  return std::nullopt;
}

SurfaceSample generate_sample(const CatalogSpec& spec) {
  if (auto patch = generate_patch(spec)) return graph_geometry(*patch);
  const int n = spec.dim;
  const double h = spec.param("h", 0.05);
  if (spec.family == Family::Winglike) {
    return profile_surface(*generate_profile(spec), static_cast<Index>(spec.param("angular", 64)));
  }
  Vector w = Vector::Zero(n + 1);
  const double phi = spec.param("angle", 0.0);
  w(0) = std::cos(phi);
  if (n >= 2) w(1) = std::sin(phi);
  return minimal_cylinder(w, spec.param("offset", 0.0), spec.param("extent", 2.0), h);
}

}  // namespace tsol
