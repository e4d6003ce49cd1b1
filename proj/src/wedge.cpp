#include "tsol/wedge.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tsol {

namespace {

int sign_of(double v) {
  if (v > kAngleTol) return 1;
  if (v < -kAngleTol) return -1;
  return 0;
}

double g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double g1(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }
double g2(double s) {
  return s > 0.0 ? std::exp(-1.0 / s) * (1.0 - 2.0 * s) / (s * s * s * s) : 0.0;
}

Matrix cutoff_hessian(const Cutoff& c, const Vector& x) {
  const Index m = x.size();
  const double r = x.norm();
  const double t = r / c.ell;
  if (t <= 1.0 || t >= 2.0) return Matrix::Zero(m, m);
  const Vector u = x / r;
  const Matrix uu = u * u.transpose();
  return Cutoff::psi_second(t) / (c.ell * c.ell) * uu +
         Cutoff::psi_prime(t) / (c.ell * r) * (Matrix::Identity(m, m) - uu);
}

}  // namespace

Halfspace::Halfspace(Vector b_, Vector w_) : b(std::move(b_)), w(std::move(w_)) {
  if (b.size() != w.size()) throw std::invalid_argument("halfspace offset and normal differ in size");
  if (std::abs(w.norm() - 1.0) > kAngleTol * 1e2) {
    throw std::invalid_argument("halfspace normal must be a unit vector");
  }
}

bool is_vertical(const Vector& w) { return std::abs(w(w.size() - 1)) <= kAngleTol; }
bool is_vertical(const Halfspace& h) { return is_vertical(h.w); }

bool is_transverse(const Vector& w1, const Vector& w2) {
  return std::abs(w1.dot(w2)) < 1.0 - kAngleTol;
}
bool is_transverse(const Halfspace& h1, const Halfspace& h2) { return is_transverse(h1.w, h2.w); }

Matrix RigidMotion::apply_rows(const Matrix& points) const {
  return (points.rowwise() - shift.transpose()) * rotation.transpose();
}

std::pair<WedgeNormalForm, RigidMotion> normalize_pair(const Halfspace& h1, const Halfspace& h2) {
  if (!is_vertical(h1) || !is_vertical(h2)) throw std::invalid_argument("halfspaces must be vertical");
  if (!is_transverse(h1, h2)) throw std::invalid_argument("halfspaces must be transverse");
  const Index dim = h1.w.size();
  if (dim < 3) throw std::invalid_argument("a wedge needs ambient dimension >= 3");

  // Least-norm common boundary point.
  Matrix a(2, dim);
  a.row(0) = h1.w.transpose();
  a.row(1) = h2.w.transpose();
  const Eigen::Vector2d rhs(h1.b.dot(h1.w), h2.b.dot(h2.w));
  const Vector base = a.transpose() * (a * a.transpose()).ldlt().solve(rhs);

  const Vector sum = h1.w + h2.w;
  const Vector diff = h1.w - h2.w;
  WedgeNormalForm nf{sum.norm() / 2.0, diff.norm() / 2.0};

  Matrix frame(dim, 3);
  frame.col(0) = sum.normalized();
  frame.col(1) = diff.normalized();
  frame.col(2) = Vector::Unit(dim, dim - 1);
  const Eigen::HouseholderQR<Matrix> qr{frame};
  const Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);

  Matrix rot(dim, dim);
  rot.row(0) = frame.col(0).transpose();
  rot.row(1) = frame.col(1).transpose();
  for (Index k = 3; k < dim; ++k) rot.row(k - 1) = q.col(k).transpose();
  rot.row(dim - 1) = frame.col(2).transpose();
  return {nf, RigidMotion{rot, base}};
}

std::string_view WedgeVerdict::label() const {
  switch (rule) {
    case WedgeRule::BothRising: return "bowl";
    case WedgeRule::OneVertical: return "tilted_grim_reaper";
    case WedgeRule::ParallelPlanes: return "vertical_plane";
    case WedgeRule::BiHalfspace: return "bi-halfspace";
    case WedgeRule::Descending: return "sphere-comparison";
  }
  return "unknown";
}

WedgeVerdict wedge_existence(const Vector& w1, const Vector& w2) {
  if (w1.size() != w2.size()) throw std::invalid_argument("normals differ in size");
  const int s1 = sign_of(w1(w1.size() - 1));
  const int s2 = sign_of(w2(w2.size() - 1));
  if (s1 < 0 || s2 < 0) return {false, WedgeRule::Descending};
  if (s1 > 0 && s2 > 0) return {true, WedgeRule::BothRising};
  if (s1 > 0 || s2 > 0) return {true, WedgeRule::OneVertical};
  if (!is_transverse(w1, w2)) return {true, WedgeRule::ParallelPlanes};
  return {false, WedgeRule::BiHalfspace};
}

std::optional<Index> containment_check(const SurfaceSample& s,
                                       const std::vector<Halfspace>& halfspaces, double tol) {
  for (Index i = 0; i < s.size(); ++i) {
    const Vector p = s.points.row(i).transpose();
    for (const auto& h : halfspaces) {
      if (!h.contains(p, tol)) return i;
    }
  }
  return std::nullopt;
}

Cutoff::Cutoff(double ell_, double rho_, double sup_f_) : ell(ell_), rho(rho_), sup_f(sup_f_) {
  if (!(ell > rho) || !(rho >= 0.0)) throw std::invalid_argument("cutoff needs l > rho >= 0");
}

double Cutoff::psi(double t) {
  if (t <= 1.0) return 0.0;
  if (t >= 2.0) return 1.0;
  const double a = g(t - 1.0);
  return a / (a + g(2.0 - t));
}

double Cutoff::psi_prime(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double a = g(t - 1.0), b = g(2.0 - t);
  const double da = g1(t - 1.0), db = -g1(2.0 - t);
  const double s = a + b;
  return (da * s - a * (da + db)) / (s * s);
}

double Cutoff::psi_second(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double a = g(t - 1.0), b = g(2.0 - t);
  const double da = g1(t - 1.0), db = -g1(2.0 - t);
  const double dda = g2(t - 1.0), ddb = g2(2.0 - t);
  const double s = a + b, ds = da + db, dds = dda + ddb;
  // psi = a / s
  return dda / s - 2.0 * da * ds / (s * s) - a * dds / (s * s) + 2.0 * a * ds * ds / (s * s * s);
}

namespace {
template <typename F>
double sampled_sup(F f) {
  double m = 0.0;
  constexpr int kSamples = 200000;
  for (int i = 1; i < kSamples; ++i) m = std::max(m, std::abs(f(1.0 + double(i) / kSamples)));
  return m;
}
}  // namespace

double Cutoff::psi_prime_sup() {
  static const double v = sampled_sup(psi_prime);
  return v;
}

double Cutoff::psi_second_sup() {
  static const double v = sampled_sup(psi_second);
  return v;
}

double Cutoff::value(const Vector& x) const { return psi(x.norm() / ell); }

Vector Cutoff::gradient(const Vector& x) const {
  const double r = x.norm();
  if (r == 0.0) return Vector::Zero(x.size());
  return psi_prime(r / ell) / ell * x / r;
}

double Cutoff::laplacian(const Vector& x) const { return cutoff_hessian(*this, x).trace(); }

double Cutoff::gradient_bound() const { return psi_prime_sup() / ell; }

double Cutoff::laplacian_bound(Index m) const {
  return (psi_second_sup() + static_cast<double>(m - 1) * psi_prime_sup()) / (ell * ell);
}

bool in_region(const WedgeNormalForm& nf, double R, const Vector& x) {
  const double a = nf.xi * x(0) + nf.eta * x(1);
  const double b = nf.xi * x(0) - nf.eta * x(1);
  if (a < 0.0 || b < 0.0) return false;
  if (!(x(0) < R * nf.eta * nf.eta / nf.xi)) return false;
  return std::hypot(x(0) - R / nf.xi, x(1)) > R;
}

OYProbeResult oy_probe(const SurfaceSample& s, const WedgeNormalForm& nf, double R,
                       const std::optional<Cutoff>& cutoff) {
  const DistanceField df(R, nf.xi);
  const Index count = s.size();
  const Index top = s.ambient_dim() - 1;
  std::vector<double> f(static_cast<std::size_t>(count));
  std::vector<char> inside(static_cast<std::size_t>(count));
  bool any = false;
  for (Index i = 0; i < count; ++i) {
    const Vector p = s.points.row(i).transpose();
    const bool in = in_region(nf, R, p);
    inside[static_cast<std::size_t>(i)] = in;
    any = any || in;
    double v = in ? df.distance(p) : R;
    if (cutoff) v += cutoff->sup_f * cutoff->value(p);
    f[static_cast<std::size_t>(i)] = v;
  }
  if (!any) throw std::invalid_argument("sample does not meet the region V_R");

  std::vector<Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return f[static_cast<std::size_t>(a)] > f[static_cast<std::size_t>(b)];
  });
  const auto keep = static_cast<std::size_t>((count + 9) / 10);

  OYProbeResult result;
  result.sup_f = f[static_cast<std::size_t>(order.front())];
  result.threshold = nf.xi / (2.0 * R);
  bool candidate = false;
  bool all_large = true;
  for (std::size_t k = 0; k < keep; ++k) {
    const Index i = order[k];
    const Vector p = s.points.row(i).transpose();
    const Vector nu = s.normals.row(i).transpose();
    const double h = s.mean_curvature(i);
    OYProbe row;
    row.point = p;
    row.row = i;
    row.f = f[static_cast<std::size_t>(i)];
    row.region = inside[static_cast<std::size_t>(i)] ? ProbeRegion::InV : ProbeRegion::Outside;
    Vector grad = Vector::Zero(p.size());
    double lap = 0.0;
    if (row.region == ProbeRegion::InV) {
      const auto jet = df.evaluate(p);
      grad = jet.gradient;
      const double gn = jet.chi.dot(nu);
      lap = (1.0 - gn * gn) / jet.distance + jet.gradient.dot(nu) * nu(top);
    }
    if (cutoff) {
      const Vector gc = cutoff->gradient(p);
      grad += cutoff->sup_f * gc;
      lap += cutoff->sup_f * (tangential_trace(cutoff_hessian(*cutoff, p), nu) + h * gc.dot(nu));
    }
    row.grad_norm = (grad - grad.dot(nu) * nu).norm();
    row.laplacian = lap;
    if (row.region == ProbeRegion::InV && row.grad_norm <= 0.1) {
      candidate = true;
      all_large = all_large && row.laplacian >= result.threshold;
    }
    result.rows.push_back(std::move(row));
  }
  result.contradiction = candidate && all_large;
  return result;
}

}  // namespace tsol
