#include "tsol/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace tsol {

namespace {

bool is_active(const GraphPatch& patch, std::optional<Index> node) {
  return node && patch.active(*node);
}

/// First derivative along `axis`, central when possible, else one-sided of second
/// order. `value` maps a node to the differentiated quantity.
template <typename ValueAt>
std::optional<double> first_derivative(const GraphPatch& patch, Index node, Index axis,
                                       const ValueAt& value, bool& central) {
  const double h = patch.grid.spacing;
  const auto fwd = patch.grid.shifted(node, axis, 1);
  const auto bwd = patch.grid.shifted(node, axis, -1);
  if (is_active(patch, fwd) && is_active(patch, bwd)) {
    const auto a = value(*fwd);
    const auto b = value(*bwd);
    if (!a || !b) return std::nullopt;
    return (*a - *b) / (2.0 * h);
  }
  central = false;
  const auto fwd2 = patch.grid.shifted(node, axis, 2);
  if (is_active(patch, fwd) && is_active(patch, fwd2)) {
    const auto f0 = value(node);
    const auto f1 = value(*fwd);
    const auto f2 = value(*fwd2);
    if (!f0 || !f1 || !f2) return std::nullopt;
    return (-3.0 * *f0 + 4.0 * *f1 - *f2) / (2.0 * h);
  }
  const auto bwd2 = patch.grid.shifted(node, axis, -2);
  if (is_active(patch, bwd) && is_active(patch, bwd2)) {
    const auto f0 = value(node);
    const auto f1 = value(*bwd);
    const auto f2 = value(*bwd2);
    if (!f0 || !f1 || !f2) return std::nullopt;
    return (3.0 * *f0 - 4.0 * *f1 + *f2) / (2.0 * h);
  }
  return std::nullopt;
}

std::optional<double> second_derivative(const GraphPatch& patch, const Vector& field,
                                        Index node, Index axis, bool& central) {
  const double h = patch.grid.spacing;
  const auto fwd = patch.grid.shifted(node, axis, 1);
  const auto bwd = patch.grid.shifted(node, axis, -1);
  if (is_active(patch, fwd) && is_active(patch, bwd)) {
    return (field(*fwd) - 2.0 * field(node) + field(*bwd)) / (h * h);
  }
  central = false;
  for (Index sign : {Index{1}, Index{-1}}) {
    const auto n1 = patch.grid.shifted(node, axis, sign);
    const auto n2 = patch.grid.shifted(node, axis, 2 * sign);
    const auto n3 = patch.grid.shifted(node, axis, 3 * sign);
    if (is_active(patch, n1) && is_active(patch, n2) && is_active(patch, n3)) {
      return (2.0 * field(node) - 5.0 * field(*n1) + 4.0 * field(*n2) - field(*n3)) /
             (h * h);
    }
  }
  return std::nullopt;
}

bool on_chart_edge(const GraphPatch& patch, Index node) {
  for (Index axis = 0; axis < patch.domain_dim(); ++axis) {
    for (Index sign : {Index{1}, Index{-1}}) {
      if (!is_active(patch, patch.grid.shifted(node, axis, sign))) return true;
    }
  }
  return false;
}

}  // namespace

Index GraphPatch::ambient_axis(Index k) const {
  if (direction == GraphDirection::Vertical) return k;
  return k == 0 ? domain_dim() : k;
}

LocalVector GraphPatch::point(Index node) const {
  const Vector y = grid.coordinate(node);
  LocalVector p(ambient_dim());
  for (Index k = 0; k < domain_dim(); ++k) p(ambient_axis(k)) = y(k);
  p(graph_axis()) = values(node);
  return p;
}

LocalVector GraphPatch::normal(const LocalVector& gradient) const {
  LocalVector nu = LocalVector::Zero(ambient_dim());
  nu(graph_axis()) = 1.0;
  for (Index k = 0; k < domain_dim(); ++k) nu(ambient_axis(k)) = -gradient(k);
  return nu / nu.norm();
}

Vector GraphPatch::coordinate_field(Index axis) const {
  Vector field(grid.size());
  for (Index node = 0; node < grid.size(); ++node) {
    field(node) = active(node) ? point(node)(axis) : std::nan("");
  }
  return field;
}

bool has_full_stencil(const GraphPatch& patch, Index node) {
  const Index dim = patch.domain_dim();
  Index combos = 1;
  for (Index a = 0; a < dim; ++a) combos *= 3;
  for (Index c = 0; c < combos; ++c) {
    std::optional<Index> cur = node;
    Index code = c;
    for (Index a = 0; a < dim && cur; ++a) {
      const Index offset = code % 3 - 1;
      code /= 3;
      if (offset != 0) cur = patch.grid.shifted(*cur, a, offset);
    }
    if (!is_active(patch, cur)) return false;
  }
  return true;
}

std::optional<Jet> field_jet(const GraphPatch& patch, const Vector& field, Index node) {
  if (!patch.active(node)) return std::nullopt;
  const Index dim = patch.domain_dim();
  Jet jet;
  jet.central = true;
  jet.gradient.resize(dim);
  jet.hessian.resize(dim, dim);
  const auto raw = [&](Index k) -> std::optional<double> { return field(k); };
  for (Index i = 0; i < dim; ++i) {
    const auto d = first_derivative(patch, node, i, raw, jet.central);
    if (!d) return std::nullopt;
    jet.gradient(i) = *d;
    const auto dd = second_derivative(patch, field, node, i, jet.central);
    if (!dd) return std::nullopt;
    jet.hessian(i, i) = *dd;
  }
  for (Index i = 0; i < dim; ++i) {
    for (Index j = i + 1; j < dim; ++j) {
      double sum = 0.0;
      for (const auto& [outer, inner] : {std::pair{i, j}, std::pair{j, i}}) {
        bool unused = true;
        const auto inner_derivative = [&](Index k) -> std::optional<double> {
          if (!patch.active(k)) return std::nullopt;
          return first_derivative(patch, k, inner, raw, unused);
        };
        const auto d = first_derivative(patch, node, outer, inner_derivative, jet.central);
        if (!d) return std::nullopt;
        sum += *d;
      }
      jet.hessian(i, j) = jet.hessian(j, i) = 0.5 * sum;
    }
  }
  return jet;
}

SurfaceSample graph_geometry(const GraphPatch& patch) {
  for (Index d : patch.grid.dims) {
    if (d < 3) throw std::invalid_argument("graph patch must span at least 3 nodes per axis");
  }
  if (patch.values.size() != patch.grid.size()) {
    throw std::invalid_argument("graph patch values do not match its grid");
  }
  const Index dim = patch.domain_dim();
  std::vector<Index> nodes;
  std::vector<Jet> jets;
  for (Index node = 0; node < patch.grid.size(); ++node) {
    if (auto jet = field_jet(patch, patch.values, node)) {
      nodes.push_back(node);
      jets.push_back(std::move(*jet));
    }
  }
  SurfaceSample s;
  const auto count = static_cast<Index>(nodes.size());
  s.points.resize(count, dim + 1);
  s.normals.resize(count, dim + 1);
  s.mean_curvature.resize(count);
  s.interior.resize(nodes.size());
  s.boundary.resize(nodes.size());
  s.node = nodes;
  s.spacing = patch.grid.spacing;
  s.source = patch.direction == GraphDirection::Vertical ? "vertical-graph" : "sideways-graph";
  for (Index i = 0; i < count; ++i) {
    const Index node = nodes[static_cast<std::size_t>(i)];
    const Jet& jet = jets[static_cast<std::size_t>(i)];
    const double grad2 = jet.gradient.squaredNorm();
    const double w = std::sqrt(1.0 + grad2);
    s.points.row(i) = patch.point(node).transpose();
    s.normals.row(i) = patch.normal(jet.gradient).transpose();
    const double quad = jet.gradient.dot(jet.hessian * jet.gradient);
    s.mean_curvature(i) = ((1.0 + grad2) * jet.hessian.trace() - quad) / (w * w * w);
    s.interior[static_cast<std::size_t>(i)] = jet.central && has_full_stencil(patch, node);
    s.boundary[static_cast<std::size_t>(i)] = on_chart_edge(patch, node);
  }
  return s;
}

double metric_inner_product(const LocalVector& du, const LocalVector& a, const LocalVector& b) {
  const double w2 = 1.0 + du.squaredNorm();
  return a.dot(b) - du.dot(a) * du.dot(b) / w2;
}

Vector surface_laplacian(const GraphPatch& patch, const Vector& field) {
  Vector out = Vector::Constant(patch.grid.size(), std::nan(""));
  for (Index node = 0; node < patch.grid.size(); ++node) {
    const auto ju = field_jet(patch, patch.values, node);
    if (!ju) continue;
    const auto jf = field_jet(patch, field, node);
    if (!jf) continue;
    const LocalVector& p = ju->gradient;
    const double w2 = 1.0 + p.squaredNorm();
    const LocalMatrix ginv =
        LocalMatrix::Identity(p.size(), p.size()) - p * p.transpose() / w2;
    const double contracted_u = (ginv.cwiseProduct(ju->hessian)).sum();
    const double contracted_f = (ginv.cwiseProduct(jf->hessian)).sum();
    out(node) = contracted_f - contracted_u / w2 * p.dot(jf->gradient);
  }
  return out;
}

SurfaceSample sample_sphere(int n, double radius, const Vector& center, Index resolution) {
  if (n != 1 && n != 2) throw std::invalid_argument("sphere samples support n in {1, 2}");
  if (center.size() != n + 1) throw std::invalid_argument("sphere center has wrong size");
  const auto dirs = unit_directions(n + 1, resolution);
  SurfaceSample s;
  const auto count = static_cast<Index>(dirs.size());
  s.points.resize(count, n + 1);
  s.normals.resize(count, n + 1);
  s.mean_curvature = Vector::Constant(count, n / radius);
  s.interior.assign(dirs.size(), 1);
  s.boundary.assign(dirs.size(), 0);
  s.node.assign(dirs.size(), -1);
  s.spacing = 2.0 * std::numbers::pi * radius / static_cast<double>(resolution);
  s.source = "sphere";
  for (Index i = 0; i < count; ++i) {
    const Vector& u = dirs[static_cast<std::size_t>(i)];
    s.points.row(i) = (center + radius * u).transpose();
    s.normals.row(i) = -u.transpose();
  }
  return s;
}

ProfileCurvature profile_curvature(const RotProfile& profile) {
  const auto& pts = profile.samples;
  const std::size_t count = pts.size();
  ProfileCurvature out;
  out.mean_curvature.assign(count, std::nan(""));
  out.alpha.assign(count, std::nan(""));
  const double ds = profile.step;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    const double tr = (pts[k + 1].r - pts[k - 1].r) / (2.0 * ds);
    const double tz = (pts[k + 1].z - pts[k - 1].z) / (2.0 * ds);
    const double kr = (pts[k + 1].r - 2.0 * pts[k].r + pts[k - 1].r) / (ds * ds);
    const double kz = (pts[k + 1].z - 2.0 * pts[k].z + pts[k - 1].z) / (ds * ds);
    const double speed = std::hypot(tr, tz);
    const double kappa = (tr * kz - tz * kr) / (speed * speed * speed);
    const double alpha = std::atan2(tz, tr);
    out.alpha[k] = alpha;
    if (pts[k].r > 0.0) {
      out.mean_curvature[k] = kappa + (profile.dim - 1) * std::sin(alpha) / pts[k].r;
    }
  }
  return out;
}

SurfaceSample profile_surface(const RotProfile& profile, Index angular_resolution) {
  const int n = profile.dim;
  if (n != 2 && n != 3) throw std::invalid_argument("profile surfaces support n in {2, 3}");
  const auto curv = profile_curvature(profile);
  const auto dirs = unit_directions(n, angular_resolution);
  const auto rows = static_cast<Index>(profile.samples.size() * dirs.size());
  SurfaceSample s;
  s.points.resize(rows, n + 1);
  s.normals.resize(rows, n + 1);
  s.mean_curvature.resize(rows);
  s.spacing = profile.step;
  s.source = "rotation-profile";
  Index row = 0;
  for (std::size_t k = 0; k < profile.samples.size(); ++k) {
    const auto& pk = profile.samples[k];
    const bool ok = std::isfinite(curv.mean_curvature[k]);
    const double alpha = ok ? curv.alpha[k] : pk.alpha;
    for (const Vector& omega : dirs) {
      s.points.row(row).head(n) = (pk.r * omega).transpose();
      s.points(row, n) = pk.z;
      s.normals.row(row).head(n) = (-std::sin(alpha) * omega).transpose();
      s.normals(row, n) = std::cos(alpha);
      s.mean_curvature(row) = ok ? curv.mean_curvature[k] : 0.0;
      s.interior.push_back(ok ? 1 : 0);
      s.boundary.push_back(k == 0 || k + 1 == profile.samples.size() ? 1 : 0);
      s.node.push_back(-1);
      ++row;
    }
  }
  return s;
}

std::vector<Vector> unit_directions(Index m, Index count) {
  std::vector<Vector> dirs;
  if (m == 1) {
    dirs.push_back(Vector::Constant(1, 1.0));
    dirs.push_back(Vector::Constant(1, -1.0));
    return dirs;
  }
  if (count < 1) throw std::invalid_argument("direction count must be positive");
  if (m == 2) {
    for (Index i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      dirs.push_back(Vector{{std::cos(t), std::sin(t)}});
    }
    return dirs;
  }
  if (m == 3) {
    // Fibonacci lattice.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (Index i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * static_cast<double>(i);
      dirs.push_back(Vector{{rho * std::cos(t), rho * std::sin(t), z}});
    }
    return dirs;
  }
  throw std::invalid_argument("unit directions support m in {1, 2, 3}");
}

}  // namespace tsol
