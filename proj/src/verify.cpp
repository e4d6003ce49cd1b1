#include "tsol/verify.hpp"

#include <cmath>
#include <limits>

namespace tsol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_nonempty(const SurfaceSample& s) {
  if (s.size() == 0) throw std::invalid_argument("empty surface sample");
}

double max_abs_interior(const SurfaceSample& s) {
  double m = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s.interior[static_cast<std::size_t>(i)]) m = std::max(m, std::abs(s.mean_curvature(i)));
  }
  return m;
}

}  // namespace

ResidualReport summarize(const Vector& residual, double grid_h, double curvature_scale) {
  ResidualReport r;
  r.grid_h = grid_h;
  r.curvature_scale = curvature_scale;
  double sum2 = 0.0;
  for (Index i = 0; i < residual.size(); ++i) {
    const double v = residual(i);
    if (!std::isfinite(v)) continue;
    r.max_abs = std::max(r.max_abs, std::abs(v));
    sum2 += v * v;
    ++r.count;
  }
  r.l2 = r.count > 0 ? std::sqrt(sum2 / static_cast<double>(r.count)) : 0.0;
  return r;
}

std::optional<double> convergence_order(std::span<const ResidualReport> reports) {
  if (reports.size() < 2) return std::nullopt;
  std::optional<double> order;
  for (std::size_t k = 0; k + 1 < reports.size(); ++k) {
    const auto& coarse = reports[k];
    const auto& fine = reports[k + 1];
    if (coarse.max_abs <= 1e-12 && fine.max_abs <= 1e-12) continue;
    const double p = std::log(coarse.max_abs / std::max(fine.max_abs, 1e-300)) /
                     std::log(coarse.grid_h / fine.grid_h);
    order = order ? std::min(*order, p) : p;
  }
  return order;
}

Vector translator_residuals(const SurfaceSample& s) {
  Vector r = Vector::Constant(s.size(), kNaN);
  const Index top = s.ambient_dim() - 1;
  for (Index i = 0; i < s.size(); ++i) {
    if (s.interior[static_cast<std::size_t>(i)]) r(i) = s.mean_curvature(i) - s.normals(i, top);
  }
  return r;
}

ResidualReport translator_residual(const SurfaceSample& s) {
  require_nonempty(s);
  return summarize(translator_residuals(s), s.spacing, max_abs_interior(s));
}

Vector hi_mean_curvature(const SurfaceSample& s) {
  Vector r = translator_residuals(s);
  const Index top = s.ambient_dim() - 1;
  const double n = static_cast<double>(s.dim());
  for (Index i = 0; i < s.size(); ++i) r(i) *= std::exp(-s.points(i, top) / n);
  return r;
}

ResidualReport hi_minimality_residual(const SurfaceSample& s) {
  require_nonempty(s);
  return summarize(hi_mean_curvature(s), s.spacing, max_abs_interior(s));
}

IdentityTerms identity_terms(const DistanceField& df, const LocalVector& point,
                             const LocalVector& normal, double mean_curvature) {
  const auto jet = df.evaluate(point);
  const Vector nu = normal;
  IdentityTerms t;
  t.distance = jet.distance;
  t.normal_gradient = jet.gradient.dot(nu);
  t.gradient_norm = std::abs(jet.chi.dot(nu));
  t.tangential_trace = spectral_tangential_trace(jet.hessian, nu);
  t.ambient_laplacian = t.tangential_trace + mean_curvature * t.normal_gradient;
  t.identity_rhs = (1.0 - t.gradient_norm * t.gradient_norm) / t.distance +
                   t.normal_gradient * nu(nu.size() - 1);
  return t;
}

namespace {

struct ChartLaplacian {
  SurfaceSample sample;
  Vector laplacian;  // indexed by sample row
};

ChartLaplacian distance_laplacian(const GraphPatch& patch, const DistanceField& df) {
  Vector field(patch.grid.size());
  for (Index node = 0; node < patch.grid.size(); ++node) {
    if (!patch.active(node)) {
      field(node) = kNaN;
      continue;
    }
    const double d = df.distance(patch.point(node));
    if (!(d > 0.0)) throw std::invalid_argument("patch touches the locus of the distance field");
    field(node) = d;
  }
  const Vector lap = surface_laplacian(patch, field);
  ChartLaplacian out{graph_geometry(patch), Vector()};
  out.laplacian.resize(out.sample.size());
  for (Index i = 0; i < out.sample.size(); ++i) {
    out.laplacian(i) = lap(out.sample.node[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

ResidualReport main_identity_check(const GraphPatch& patch, const DistanceField& df) {
  const auto chart = distance_laplacian(patch, df);
  const auto& s = chart.sample;
  Vector residual = Vector::Constant(s.size(), kNaN);
  double scale = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (!s.interior[static_cast<std::size_t>(i)]) continue;
    const auto t = identity_terms(df, s.points.row(i).transpose(), s.normals.row(i).transpose(),
                                  s.mean_curvature(i));
    residual(i) = chart.laplacian(i) - t.identity_rhs;
    scale = std::max(scale, std::abs(t.identity_rhs));
  }
  return summarize(residual, s.spacing, scale);
}

ResidualReport laplacian_two_route_check(const GraphPatch& patch, const DistanceField& df) {
  const auto chart = distance_laplacian(patch, df);
  const auto& s = chart.sample;
  Vector residual = Vector::Constant(s.size(), kNaN);
  double scale = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (!s.interior[static_cast<std::size_t>(i)]) continue;
    const auto t = identity_terms(df, s.points.row(i).transpose(), s.normals.row(i).transpose(),
                                  s.mean_curvature(i));
    residual(i) = chart.laplacian(i) - t.ambient_laplacian;
    scale = std::max(scale, std::abs(t.ambient_laplacian));
  }
  return summarize(residual, s.spacing, scale);
}

Vector norm_laplacian(const SurfaceSample& s) {
  const double n = static_cast<double>(s.dim());
  Vector out(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    const double r = s.points.row(i).norm();
    if (!(r > 0.0)) throw std::invalid_argument("sample contains the origin");
    const double c = s.points.row(i).dot(s.normals.row(i)) / r;
    out(i) = ((n - 1.0) + c * c) / r + s.mean_curvature(i) * c;
  }
  return out;
}

ResidualReport oy_bound_checks(const SurfaceSample& s) {
  require_nonempty(s);
  const Vector lap = norm_laplacian(s);
  const double n = static_cast<double>(s.dim());
  Vector excess = Vector::Constant(s.size(), kNaN);
  for (Index i = 0; i < s.size(); ++i) {
    if (!s.interior[static_cast<std::size_t>(i)]) continue;
    const double r = s.points.row(i).norm();
    const double lap_excess = std::abs(lap(i)) - (n / r + 1.0);
    const double h_excess = std::abs(s.mean_curvature(i)) - 1.0;
    excess(i) = std::max({0.0, lap_excess, h_excess});
  }
  return summarize(excess, s.spacing, max_abs_interior(s));
}

ResidualReport killing_coordinate_check(const GraphPatch& patch, Index axis) {
  const Index top = patch.ambient_dim() - 1;
  if (axis < 0 || axis >= top) {
    throw std::invalid_argument("coordinate must be horizontal; the translation axis is not Killing");
  }
  const Vector xj = patch.coordinate_field(axis);
  const Vector height = patch.coordinate_field(top);
  const Vector lap = surface_laplacian(patch, xj);
  const SurfaceSample s = graph_geometry(patch);
  const double n = static_cast<double>(patch.domain_dim());
  Vector residual = Vector::Constant(s.size(), kNaN);
  for (Index i = 0; i < s.size(); ++i) {
    if (!s.interior[static_cast<std::size_t>(i)]) continue;
    const Index node = s.node[static_cast<std::size_t>(i)];
    const auto ju = field_jet(patch, patch.values, node);
    const auto jh = field_jet(patch, height, node);
    const auto jx = field_jet(patch, xj, node);
    if (!ju || !jh || !jx) continue;
    const double cross = metric_inner_product(ju->gradient, jh->gradient, jx->gradient);
    residual(i) = std::exp(-2.0 * s.points(i, top) / n) * (lap(node) + cross);
  }
  return summarize(residual, s.spacing, max_abs_interior(s));
}

}  // namespace tsol
