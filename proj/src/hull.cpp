#include "tsol/hull.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

namespace tsol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const Vector& a, const Vector& b) {
  for (Index k = 0; k < a.size(); ++k) {
    if (a(k) != b(k)) return a(k) < b(k);
  }
  return false;
}

Matrix rows_of(const std::vector<Vector>& pts) {
  Matrix m(static_cast<Index>(pts.size()), pts.empty() ? 0 : pts.front().size());
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Index>(i)) = pts[i].transpose();
  return m;
}

double cross2(const Vector& o, const Vector& a, const Vector& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Vector> hull2(std::vector<Vector> pts, double eps) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
              return a(0) == b(0) && a(1) == b(1);
            }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vector> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], p) <= eps) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

struct Tri {
  std::array<int, 3> v;
  Eigen::Vector3d normal;
  double offset;
};

Tri make_tri(const std::vector<Eigen::Vector3d>& p, int a, int b, int c) {
  Tri t{{a, b, c}, (p[b] - p[a]).cross(p[c] - p[a]), 0.0};
  t.normal.normalize();
  t.offset = t.normal.dot(p[a]);
  return t;
}

/// Incremental hull of points with full affine dimension; returns outward triangles.
std::vector<Tri> hull3(const std::vector<Eigen::Vector3d>& p, std::array<int, 4> seed, double eps) {
  std::vector<Tri> faces;
  const Eigen::Vector3d centroid =
      (p[seed[0]] + p[seed[1]] + p[seed[2]] + p[seed[3]]) / 4.0;
  const auto oriented = [&](int a, int b, int c) {
    Tri t = make_tri(p, a, b, c);
    if (t.normal.dot(centroid) - t.offset > 0) t = make_tri(p, a, c, b);
    return t;
  };
  faces.push_back(oriented(seed[0], seed[1], seed[2]));
  faces.push_back(oriented(seed[0], seed[1], seed[3]));
  faces.push_back(oriented(seed[0], seed[2], seed[3]));
  faces.push_back(oriented(seed[1], seed[2], seed[3]));
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if (std::find(seed.begin(), seed.end(), i) != seed.end()) continue;
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (faces[f].normal.dot(p[i]) - faces[f].offset > eps) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;
    std::set<std::pair<int, int>> edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) edges.insert({v[e], v[(e + 1) % 3]});
    }
    std::vector<Tri> next;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) next.push_back(faces[f]);
    }
    for (const auto& [a, b] : edges) {
      if (edges.count({b, a})) continue;
      next.push_back(make_tri(p, a, b, i));
    }
    faces = std::move(next);
  }
  return faces;
}

double diameter_bound(const Matrix& pts) {
  return (pts.colwise().maxCoeff() - pts.colwise().minCoeff()).norm();
}

}  // namespace

std::vector<Vector> ConvexHull::outward_normals() const {
  std::vector<Vector> out;
  for (const auto& f : facets) out.push_back((basis * f.normal).normalized());
  const Index m = basis.rows();
  if (affine_dim < m) {
    Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeFullU);
    for (Index k = affine_dim; k < m; ++k) {
      out.push_back(svd.matrixU().col(k));
      out.push_back(-svd.matrixU().col(k));
    }
  }
  return out;
}

bool ConvexHull::contains(const Vector& x, double tol) const {
  const Vector rel = x - origin;
  const Vector y = basis.transpose() * rel;
  if ((rel - basis * y).norm() > tol) return false;
  if (affine_dim == 0) return rel.norm() <= tol;
  for (const auto& f : facets) {
    if (f.normal.dot(y) > f.offset + tol) return false;
  }
  return true;
}

ConvexHull convex_hull(const Matrix& points) {
  if (points.rows() == 0) throw std::invalid_argument("convex hull of an empty set");
  const Index m = points.cols();
  if (m < 1 || m > 3) throw std::invalid_argument("convex hull supports dimensions 1 to 3");
  const double diam = diameter_bound(points);
  const double tol = 1e-10 * std::max(diam, 1.0);

  ConvexHull hull;
  hull.origin = points.colwise().mean().transpose();
  const Matrix centered = points.rowwise() - hull.origin.transpose();
  Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  const Vector sv = svd.singularValues();
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > tol * std::sqrt(static_cast<double>(points.rows()))) ++rank;
  }
  hull.affine_dim = rank;
  hull.basis = svd.matrixV().leftCols(rank);
  const Matrix local = centered * hull.basis;  // rows in basis coordinates

  std::vector<Vector> verts;
  if (rank == 0) {
    verts.push_back(points.row(0).transpose());
  } else if (rank == 1) {
    Index lo = 0, hi = 0;
    for (Index i = 0; i < local.rows(); ++i) {
      if (local(i, 0) < local(lo, 0)) lo = i;
      if (local(i, 0) > local(hi, 0)) hi = i;
    }
    verts = {points.row(lo).transpose(), points.row(hi).transpose()};
    hull.facets.push_back({Vector::Constant(1, 1.0), local(hi, 0)});
    hull.facets.push_back({Vector::Constant(1, -1.0), -local(lo, 0)});
  } else if (rank == 2) {
    std::vector<Vector> pts;
    std::map<std::pair<double, double>, Index> origin_row;
    for (Index i = 0; i < local.rows(); ++i) {
      pts.push_back(local.row(i).transpose());
      origin_row.emplace(std::pair{local(i, 0), local(i, 1)}, i);
    }
    const auto h = hull2(pts, tol * tol);
    for (std::size_t k = 0; k < h.size(); ++k) {
      verts.push_back(points.row(origin_row.at({h[k](0), h[k](1)})).transpose());
      const Vector& a = h[k];
      const Vector& b = h[(k + 1) % h.size()];
      Vector nrm(2);
      nrm << b(1) - a(1), a(0) - b(0);
      nrm.normalize();
      hull.facets.push_back({nrm, nrm.dot(a)});
    }
  } else {
    std::vector<Eigen::Vector3d> p(static_cast<std::size_t>(local.rows()));
    for (Index i = 0; i < local.rows(); ++i) p[static_cast<std::size_t>(i)] = local.row(i).transpose();
    // Seed tetrahedron from extreme points.
    int a = 0;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
      if (p[i](0) < p[a](0)) a = i;
    }
    int b = a;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
      if ((p[i] - p[a]).norm() > (p[b] - p[a]).norm()) b = i;
    }
    int c = a;
    double best = -1;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
      const double d = (p[i] - p[a]).cross(p[b] - p[a]).norm();
      if (d > best) best = d, c = i;
    }
    int d4 = a;
    best = -1;
    const Eigen::Vector3d nrm = (p[b] - p[a]).cross(p[c] - p[a]).normalized();
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
      const double d = std::abs(nrm.dot(p[i] - p[a]));
      if (d > best) best = d, d4 = i;
    }
    const auto tris = hull3(p, {a, b, c, d4}, tol);
    std::set<int> used;
    for (const auto& t : tris) {
      used.insert(t.v.begin(), t.v.end());
      hull.facets.push_back({Vector(t.normal), t.offset});
    }
    for (int i : used) verts.push_back(points.row(i).transpose());
  }
  std::sort(verts.begin(), verts.end(), lex_less);
  hull.vertices = rows_of(verts);
  return hull;
}

std::pair<double, double> support_width(const Matrix& points, const Vector& u) {
  if (points.rows() == 0) throw std::invalid_argument("support width of an empty set");
  const Vector proj = points * u;
  return {proj.minCoeff(), proj.maxCoeff()};
}

std::string_view variant_name(HullVariant v) {
  switch (v) {
    case HullVariant::FullSpace: return "FullSpace";
    case HullVariant::Halfspace: return "Halfspace";
    case HullVariant::Slab: return "Slab";
    case HullVariant::Hyperplane: return "Hyperplane";
    case HullVariant::Compact: return "Compact";
    case HullVariant::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

std::string HullCase::describe() const {
  std::string out = "case=";
  out += variant_name(variant);
  char buf[64];
  std::snprintf(buf, sizeof buf, " width=%.17g", width);
  out += buf;
  out += " normal=";
  for (Index k = 0; k < normal.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%s%.17g", k ? "," : "", normal(k) == 0.0 ? 0.0 : normal(k));
    out += buf;
  }
  return out;
}

std::vector<double> SamplingProtocol::radii() const {
  if (!(rho0 > 0.0) || levels < 3) throw std::invalid_argument("protocol needs rho0 > 0 and K >= 3");
  std::vector<double> r;
  for (int k = 0; k <= levels; ++k) r.push_back(rho0 * std::ldexp(1.0, k));
  return r;
}

std::vector<Vector> SamplingProtocol::direction_set(Index m) const {
  if (m <= 3) return unit_directions(m, directions);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vector> dirs;
  for (Index i = 0; i < directions; ++i) {
    Vector v(m);
    for (Index k = 0; k < m; ++k) v(k) = normal(rng);
    dirs.push_back(v.normalized());
  }
  return dirs;
}

HullCase classify_hull(const SurfaceSampler& sampler, Index dim, const SamplingProtocol& protocol) {
  const auto radii = protocol.radii();
  const auto K = radii.size() - 1;
  Matrix last, earlier;
  {
    const Matrix pk = sampler(radii[K]);
    const Matrix pe = sampler(radii[K - 2]);
    if (pk.rows() == 0 || pe.rows() == 0) return {HullVariant::Indeterminate, 0.0, Vector()};
    if (pk.cols() != dim + 1) throw std::invalid_argument("sampler dimension mismatch");
    last = pk.leftCols(dim);
    earlier = pe.leftCols(dim);
  }

  std::vector<Vector> candidates = protocol.direction_set(dim);
  if (dim <= 3) {
    const Matrix* hull_input = &last;
    Matrix reduced;
    if (dim == 3) {
      // Extreme points along a dense direction set carry the hull's facets.
      std::set<Index> keep;
      for (const auto& u : unit_directions(3, 2000)) {
        Index best = 0;
        (last * u).maxCoeff(&best);
        keep.insert(best);
      }
      reduced.resize(static_cast<Index>(keep.size()), 3);
      Index r = 0;
      for (Index i : keep) reduced.row(r++) = last.row(i);
      hull_input = &reduced;
    }
    for (const auto& n : convex_hull(*hull_input).outward_normals()) candidates.push_back(n);
  }

  const double diam = diameter_bound(last);
  struct Dir {
    Vector u;
    bool pos, neg;
    double width;
  };
  std::vector<Dir> dirs;
  for (const auto& u : candidates) {
    const auto [lo_k, hi_k] = support_width(last, u);
    const auto [lo_e, hi_e] = support_width(earlier, u);
    const double width = hi_k - lo_k;
    const double slack = 1e-3 * width + 1e-12 * diam;
    dirs.push_back({u, hi_k - hi_e <= slack, (-lo_k) - (-lo_e) <= slack, width});
  }

  bool any = false, all = true;
  for (const auto& d : dirs) {
    any = any || d.pos || d.neg;
    all = all && d.pos && d.neg;
  }
  if (!any) return {HullVariant::FullSpace, 0.0, Vector()};
  if (all) return {HullVariant::Compact, 0.0, Vector()};

  const auto parallel = [](const Vector& a, const Vector& b) {
    return std::abs(a.dot(b)) >= 1.0 - 1e-6;
  };
  const Dir* pair = nullptr;
  for (const auto& d : dirs) {
    if (d.pos && d.neg && (!pair || d.width < pair->width)) pair = &d;
  }
  if (pair) {
    for (const auto& d : dirs) {
      if ((d.pos || d.neg) && !parallel(d.u, pair->u)) return {HullVariant::Indeterminate, 0.0, Vector()};
    }
    Vector normal = pair->u;
    if (lex_less(normal, -normal)) normal = -normal;
    if (pair->width <= 1e-6 * diam) return {HullVariant::Hyperplane, pair->width, normal};
    return {HullVariant::Slab, pair->width, normal};
  }
  const Dir* one = nullptr;
  for (const auto& d : dirs) {
    if (!(d.pos || d.neg)) continue;
    const Vector outward = d.pos ? d.u : Vector(-d.u);
    if (!one) {
      one = &d;
    } else if (!parallel(outward, one->pos ? one->u : Vector(-one->u))) {
      return {HullVariant::Indeterminate, 0.0, Vector()};
    }
  }
  return {HullVariant::Halfspace, 0.0, one->pos ? one->u : Vector(-one->u)};
}

CompactnessReport compactness_probe(const SurfaceSampler& sampler, const SamplingProtocol& protocol) {
  const auto radii = protocol.radii();
  const auto K = radii.size() - 1;
  const Matrix pk = sampler(radii[K]);
  const Matrix pe = sampler(radii[K - 2]);
  if (pk.rows() == 0 || pe.rows() == 0) throw std::invalid_argument("sampler returned no points");
  const Index top = pk.cols() - 1;
  const auto stats = [top](const Matrix& p) {
    return std::array<double, 3>{p.rowwise().norm().maxCoeff(), p.col(top).maxCoeff(),
                                 p.leftCols(top).rowwise().norm().maxCoeff()};
  };
  const auto sk = stats(pk);
  const auto se = stats(pe);
  const auto stable = [](double late, double early, double scale) {
    return late - early <= 1e-3 * std::max(std::abs(scale), 1e-12);
  };
  CompactnessReport r;
  r.max_norm = sk[0];
  r.sup_height = sk[1];
  r.max_projection = sk[2];
  // A stabilized maximum must also sit well inside the sampled ball.
  r.compact = stable(sk[0], se[0], sk[0]) && sk[0] < radii[K - 2];
  r.bounded_height = stable(sk[1], se[1], sk[0]);
  r.bounded_projection = stable(sk[2], se[2], sk[0]);
  return r;
}

BoundaryHullReport boundary_hull_bound_check(const SurfaceSample& s) {
  const Index n = s.dim();
  std::vector<Vector> boundary;
  double top_boundary = -kInf, top_interior = -kInf;
  for (Index i = 0; i < s.size(); ++i) {
    if (s.boundary[static_cast<std::size_t>(i)]) {
      boundary.push_back(s.points.row(i).head(n).transpose());
      top_boundary = std::max(top_boundary, s.points(i, n));
    } else {
      top_interior = std::max(top_interior, s.points(i, n));
    }
  }
  if (boundary.empty()) throw std::invalid_argument("sample has no boundary");
  if (n > 3) throw std::invalid_argument("boundary hull check supports n <= 3");
  const ConvexHull hull = convex_hull(rows_of(boundary));
  const double tol = s.spacing;
  BoundaryHullReport r;
  r.height_gap = std::max(0.0, top_interior - top_boundary);
  bool ok = r.height_gap <= tol;
  for (Index i = 0; i < s.size(); ++i) {
    const Vector x = s.points.row(i).head(n).transpose();
    if (!hull.contains(x, tol)) {
      ok = false;
      // distance estimate: worst facet violation
      const Vector rel = x - hull.origin;
      const Vector y = hull.basis.transpose() * rel;
      double out = (rel - hull.basis * y).norm();
      for (const auto& f : hull.facets) out = std::max(out, f.normal.dot(y) - f.offset);
      r.max_outside = std::max(r.max_outside, out);
    }
    if (s.points(i, n) > top_boundary + tol) ok = false;
  }
  r.holds = ok;
  return r;
}

double winglike_gap(const Winglike& wing, double shift, const Vector& point) {
  const Index n = point.size() - 1;
  const double r = point.head(n).norm();
  const double z = point(n) - shift;
  if (r < wing.neck_radius) return std::hypot(wing.neck_radius - r, z - wing.upper.samples.front().z);
  const auto lo = wing.lower_height(r);
  const auto hi = wing.upper_height(r);
  if (lo && hi && *lo < z && z < *hi) return -std::min(z - *lo, *hi - z);
  double gap = kInf;
  if (lo) gap = std::min(gap, std::abs(z - *lo));
  if (hi) gap = std::min(gap, std::abs(z - *hi));
  return gap;
}

BarrierFamily winglike_translates(const Winglike& wing) {
  const double base = wing.z_min.value_or(0.0);
  return {[wing, base](double s, const Vector& p) { return winglike_gap(wing, s - base, p); },
          "winglike-translates"};
}

BarrierFamily neck_growth(int n, double s_max, double h) {
  auto cache = std::make_shared<std::map<double, Winglike>>();
  return {[cache, n, s_max, h](double r, const Vector& p) {
            auto it = cache->find(r);
            if (it == cache->end()) {
              if (cache->size() > 64) cache->clear();
              it = cache->emplace(r, winglike(n, r, s_max, h)).first;
            }
            const Winglike& w = it->second;
            return winglike_gap(w, -w.z_min.value_or(0.0), p);
          },
          "neck-growth"};
}

SweepResult tangency_sweep(const SurfaceSample& s, const BarrierFamily& family,
                           const std::vector<double>& params) {
  const double tol = s.spacing;
  const auto min_gap = [&](double param) {
    std::pair<double, Index> best{kInf, -1};
    for (Index i = 0; i < s.size(); ++i) {
      const double g = family.gap(param, s.points.row(i).transpose());
      if (g < best.first) best = {g, i};
    }
    return best;
  };
  SweepResult result;
  double previous = kInf;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto [gap, row] = min_gap(params[k]);
    if (gap <= tol) {
      double lo = k == 0 ? params[k] : params[k - 1];
      double hi = params[k];
      Index touch = row;
      if (k > 0) {
        for (int iter = 0; iter < 40; ++iter) {
          const double mid = 0.5 * (lo + hi);
          const auto [g, r] = min_gap(mid);
          if (g <= tol) {
            hi = mid;
            touch = r;
          } else {
            lo = mid;
          }
        }
      }
      result.param = hi;
      result.row = touch;
      result.interior_touch = !s.boundary[static_cast<std::size_t>(touch)];
      return result;
    }
    if (gap > previous + tol) {
      throw std::invalid_argument("barrier family is not monotone on the sample");
    }
    previous = gap;
  }
  return result;
}

}  // namespace tsol
