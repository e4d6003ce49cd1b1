#include "tsol/pde.hpp"

#include "tsol/hull.hpp"

#include "stencil.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tsol {

namespace {

using namespace detail;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// s(p) and ds/dp of the lower-order term.
double source(GraphDirection dir, const LocalVector& p, double tau) {
  return dir == GraphDirection::Vertical ? tau : -tau * p(0);
}

double operator_value(GraphDirection dir, const LocalJet& j, double tau) {
  const double q = 1.0 + j.p.squaredNorm();
  return q * (j.hess.trace() - source(dir, j.p, tau)) - j.p.dot(j.hess * j.p);
}

class Solver {
 public:
  Solver(const GraphPatch& problem, const SolverOptions& options)
      : patch_(problem), opt_(options), disc_(discretize(problem)) {
    if (disc_.stencils.empty()) throw std::invalid_argument("Dirichlet problem has no interior node");
    dim_ = patch_.domain_dim();
    h_ = patch_.grid.spacing;
  }

  std::pair<GraphPatch, SolverReport> run() {
    SolverReport report;
    patch_.values = harmonic_extension(patch_);
    double tau = 0.0;
    double step = 1.0 / std::max(1, opt_.continuation_steps);
    Vector accepted = patch_.values;
    while (true) {
      const double target = std::min(1.0, tau + step);
      const bool ok = newton(target, report);
      if (ok) {
        accepted = patch_.values;
        tau = target;
        if (tau >= 1.0) break;
        step = std::min(2.0 * step, 1.0 - tau);
        continue;
      }
      patch_.values = accepted;
      step *= 0.5;
      if (step < opt_.min_stage || report.max_gradient > opt_.gradient_limit) {
        report.converged = false;
        report.nonexistence_flag = true;
        report.message = report.max_gradient > opt_.gradient_limit
                             ? "gradient blow-up"
                             : "damped Newton failed at speed " + std::to_string(target);
        // Report the state reached at the last accepted stage.
        report.final_residual = residual_norm(1.0);
        report.max_gradient = std::max(report.max_gradient, max_gradient());
        return {patch_, report};
      }
    }
    report.converged = true;
    report.final_residual = residual_norm(1.0);
    report.max_gradient = max_gradient();
    report.message = "converged";
    return {patch_, report};
  }

  double residual_norm(double tau) const {
    double m = 0.0;
    for (const auto& s : disc_.stencils) {
      const auto j = local_jet(patch_.values, s, dim_, h_);
      const double w = std::sqrt(1.0 + j.p.squaredNorm());
      m = std::max(m, std::abs(operator_value(patch_.direction, j, tau)) / (w * w * w));
    }
    return m;
  }

  double max_gradient() const {
    double m = 0.0;
    for (const auto& s : disc_.stencils) m = std::max(m, local_jet(patch_.values, s, dim_, h_).p.norm());
    return m;
  }

 private:
  double merit(const Vector& u, double tau) const {
    double sum = 0.0;
    for (const auto& s : disc_.stencils) {
      const auto j = local_jet(u, s, dim_, h_);
      const double w = std::sqrt(1.0 + j.p.squaredNorm());
      const double r = operator_value(patch_.direction, j, tau) / (w * w * w);
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(disc_.stencils.size()));
  }

  bool newton(double tau, SolverReport& report) {
    const auto count = static_cast<Index>(disc_.stencils.size());
    Vector& u = patch_.values;
    for (int it = 0; it < opt_.max_iterations; ++it) {
      if (residual_norm(tau) <= opt_.tolerance) return true;
      std::vector<Eigen::Triplet<double>> trip;
      Vector rhs(count);
      for (Index i = 0; i < count; ++i) {
        const auto& s = disc_.stencils[static_cast<std::size_t>(i)];
        const auto j = local_jet(u, s, dim_, h_);
        const double q = 1.0 + j.p.squaredNorm();
        const double lap = j.hess.trace() - source(patch_.direction, j.p, tau);
        rhs(i) = q * lap - j.p.dot(j.hess * j.p);
        const LocalVector hp = j.hess * j.p;
        const auto add = [&](Index node, double v) {
          const Index col = disc_.unknown[static_cast<std::size_t>(node)];
          if (col >= 0) trip.emplace_back(i, col, v);
        };
        double centre = 0.0;
        for (Index k = 0; k < dim_; ++k) {
          double dp = 2.0 * j.p(k) * lap - 2.0 * hp(k);
          if (patch_.direction == GraphDirection::Sideways && k == 0) dp += q * tau;
          const double dh = q - j.p(k) * j.p(k);
          add(s.plus[k], dp / (2.0 * h_) + dh / (h_ * h_));
          add(s.minus[k], -dp / (2.0 * h_) + dh / (h_ * h_));
          centre += -2.0 * dh / (h_ * h_);
        }
        add(s.node, centre);
        for (Index k = 0; k < dim_; ++k) {
          for (Index l = k + 1; l < dim_; ++l) {
            const double c = -2.0 * j.p(k) * j.p(l) / (4.0 * h_ * h_);
            const auto& m = s.mixed[pair_slot(k, l)];
            add(m[0], c);
            add(m[1], -c);
            add(m[2], -c);
            add(m[3], c);
          }
        }
      }
      Eigen::SparseMatrix<double> jac(count, count);
      jac.setFromTriplets(trip.begin(), trip.end());
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(jac);
      if (lu.info() != Eigen::Success) return false;
      const Vector delta = lu.solve(rhs);
      if (lu.info() != Eigen::Success || !delta.allFinite()) return false;

      const double m0 = merit(u, tau);
      double lambda = 1.0;
      bool accepted = false;
      Vector trial = u;
      for (int halving = 0; halving <= opt_.max_halvings; ++halving) {
        for (Index i = 0; i < count; ++i) {
          const Index node = disc_.stencils[static_cast<std::size_t>(i)].node;
          trial(node) = u(node) - lambda * delta(i);
        }
        if (merit(trial, tau) < (1.0 - 1e-4 * lambda) * m0) {
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      ++report.iterations;
      if (!accepted) return false;
      u = trial;
      report.max_gradient = std::max(report.max_gradient, max_gradient());
      if (report.max_gradient > opt_.gradient_limit) return false;
    }
    return residual_norm(tau) <= opt_.tolerance;
  }

  GraphPatch patch_;
  SolverOptions opt_;
  Discretization disc_;
  Index dim_ = 0;
  double h_ = 0.0;
};

std::pair<GraphPatch, SolverReport> solve(const GraphPatch& problem, const SolverOptions& options,
                                          GraphDirection direction) {
  if (problem.values.size() != problem.grid.size()) {
    throw std::invalid_argument("problem values do not match its grid");
  }
  if (problem.direction != direction) throw std::invalid_argument("problem has the wrong graph direction");
  const GraphPatch& p = problem;
  auto result = Solver(p, options).run();
  auto& report = result.second;
  if (!report.converged || !options.refinement_check || report.max_gradient <= 1.0) return result;
  const auto coarse = coarsen(p);
  if (!coarse) return result;
  SolverOptions inner = options;
  inner.refinement_check = false;
  const auto coarse_report = Solver(*coarse, inner).run().second;
  report.coarse_gradient = coarse_report.max_gradient;
  if (coarse_report.converged && report.max_gradient >= options.growth_ratio * coarse_report.max_gradient) {
    report.converged = false;
    report.nonexistence_flag = true;
    report.message = "max |Du| grows from " + std::to_string(coarse_report.max_gradient) + " to " +
                     std::to_string(report.max_gradient) + " under refinement";
  }
  return result;
}

}  // namespace

std::pair<GraphPatch, SolverReport> solve_vertical(const GraphPatch& problem,
                                                   const SolverOptions& options) {
  return solve(problem, options, GraphDirection::Vertical);
}

std::pair<GraphPatch, SolverReport> solve_side(const GraphPatch& problem, const SolverOptions& options) {
  return solve(problem, options, GraphDirection::Sideways);
}

std::optional<GraphPatch> coarsen(const GraphPatch& problem) {
  const GridSpec& g = problem.grid;
  std::vector<Index> dims;
  for (Index d : g.dims) dims.push_back((d + 1) / 2);
  GraphPatch c{GridSpec(g.origin, 2.0 * g.spacing, dims), Vector(), problem.direction, {}};
  c.values = Vector::Zero(c.grid.size());
  if (!problem.mask.empty()) c.mask.assign(static_cast<std::size_t>(c.grid.size()), 1);
  std::array<Index, kMaxGridDim> fine{};
  bool interior = false;
  for (Index node = 0; node < c.grid.size(); ++node) {
    const auto multi = c.grid.unravel(node);
    for (Index k = 0; k < c.grid.dimension(); ++k) fine[k] = 2 * multi[k];
    const Index f = g.linear(std::span<const Index>(fine.data(), static_cast<std::size_t>(g.dimension())));
    c.values(node) = problem.values(f);
    if (!c.mask.empty()) c.mask[static_cast<std::size_t>(node)] = problem.mask[static_cast<std::size_t>(f)];
  }
  for (Index node = 0; node < c.grid.size() && !interior; ++node) {
    interior = c.active(node) && has_full_stencil(c, node);
  }
  if (!interior) return std::nullopt;
  return c;
}

Vector harmonic_extension(const GraphPatch& problem) {
  const auto disc = discretize(problem);
  const auto count = static_cast<Index>(disc.stencils.size());
  Vector u = problem.values;
  if (count == 0) return u;
  const Index dim = problem.domain_dim();
  std::vector<Eigen::Triplet<double>> trip;
  Vector rhs = Vector::Zero(count);
  for (Index i = 0; i < count; ++i) {
    const auto& s = disc.stencils[static_cast<std::size_t>(i)];
    trip.emplace_back(i, i, 2.0 * static_cast<double>(dim));
    for (Index k = 0; k < dim; ++k) {
      for (Index nb : {s.plus[k], s.minus[k]}) {
        const Index col = disc.unknown[static_cast<std::size_t>(nb)];
        if (col >= 0) {
          trip.emplace_back(i, col, -1.0);
        } else {
          rhs(i) += problem.values(nb);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> a(count, count);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
  const Vector x = lu.solve(rhs);
  for (Index i = 0; i < count; ++i) u(disc.stencils[static_cast<std::size_t>(i)].node) = x(i);
  return u;
}

Vector translator_operator(const GraphPatch& patch) {
  const auto disc = discretize(patch);
  Vector out = Vector::Constant(patch.grid.size(), kNaN);
  for (const auto& s : disc.stencils) {
    const auto j = local_jet(patch.values, s, patch.domain_dim(), patch.grid.spacing);
    const double w = std::sqrt(1.0 + j.p.squaredNorm());
    out(s.node) = operator_value(patch.direction, j, 1.0) / (w * w * w);
  }
  return out;
}

GraphPatch ball_problem(const Vector& center, double radius, double spacing,
                        GraphDirection direction,
                        const std::function<double(const Vector&)>& boundary) {
  if (!(radius > 0.0) || !(spacing > 0.0)) throw std::invalid_argument("ball problem needs positive sizes");
  const Index dim = center.size();
  const Vector lo = center - Vector::Constant(dim, radius);
  const Vector hi = center + Vector::Constant(dim, radius);
  GraphPatch p{GridSpec::box(lo, hi, spacing), Vector(), direction, {}};
  p.values = Vector::Zero(p.grid.size());
  p.mask.assign(static_cast<std::size_t>(p.grid.size()), 1);
  for (Index node = 0; node < p.grid.size(); ++node) {
    const Vector y = p.grid.coordinate(node);
    if ((y - center).norm() <= radius * (1.0 + 1e-12)) {
      p.mask[static_cast<std::size_t>(node)] = 0;
      p.values(node) = boundary(y);
    }
  }
  return p;
}

CapData construct_cap_data(double theta, double c, double spacing) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
    throw std::invalid_argument("cutting plane tilt must lie in (0, pi/2)");
  }
  const double t = std::tan(theta);
  // Height range of the cut: |z - c| < t r(z) is necessary for (z, y_2) in Omega.
  const auto b = std::make_shared<Bowl>(2, 60.0);
  const double z_max = b->height(b->r_max());
  double z_top = std::max(c, 0.0) + 1.0;
  while (z_top - c <= t * b->radius_at_height(z_top)) {
    z_top *= 1.5;
    if (z_top >= z_max) throw std::invalid_argument("cap exceeds the tabulated bowl");
  }

  const auto inside = [b, t, c](double z, double y2) {
    if (z < 0.0) return false;
    const double x1 = (z - c) / t;
    return b->height(std::hypot(x1, y2)) < z;
  };

  double y2_max = 0.0, z_lo = z_top, z_hi = 0.0;
  const int scan = 400;
  for (int i = 0; i <= scan; ++i) {
    const double z = z_top * i / scan;
    const double r = b->radius_at_height(std::min(z, z_top));
    for (int j = 0; j <= scan; ++j) {
      const double y2 = r * j / scan;
      if (inside(z, y2)) {
        y2_max = std::max(y2_max, y2);
        z_lo = std::min(z_lo, z);
        z_hi = std::max(z_hi, z);
      }
    }
  }
  if (z_hi <= z_lo) throw std::invalid_argument("the plane does not cut a cap from the bowl");
  const double pad = 2.0 * spacing + (z_hi - z_lo) / scan + y2_max / scan;
  Vector lo(2), hi(2);
  lo << std::max(0.0, z_lo - pad), -(y2_max + pad);
  hi << z_hi + pad, y2_max + pad;

  CapData data;
  data.theta = theta;
  data.height = c;
  data.problem = GraphPatch{GridSpec::box(lo, hi, spacing), Vector(), GraphDirection::Sideways, {}};
  auto& p = data.problem;
  p.values = Vector::Zero(p.grid.size());
  p.mask.assign(static_cast<std::size_t>(p.grid.size()), 1);
  std::vector<Vector> active;
  for (Index node = 0; node < p.grid.size(); ++node) {
    const Vector y = p.grid.coordinate(node);
    if (inside(y(0), y(1))) {
      p.mask[static_cast<std::size_t>(node)] = 0;
      p.values(node) = (y(0) - c) / t;
      active.push_back(y);
    }
  }

  // Nongraphical iff some horizontal line along e_1 meets the cap twice; on the axis
  // y_2 = 0 both bowl points x_1 = +-r(z) lie below P when z + t r(z) < c. The tip
  // region is sampled geometrically.
  for (int i = 0; i <= 4000 && !data.nongraphical; ++i) {
    const double z = z_hi * std::pow(10.0, -12.0 * (4000 - i) / 4000.0);
    if (z + t * b->radius_at_height(z) < c) data.nongraphical = true;
  }

  // Convexity of Omega on the grid: no masked node strictly inside the hull of the
  // active nodes (up to half a cell).
  Matrix pts(static_cast<Index>(active.size()), 2);
  for (std::size_t i = 0; i < active.size(); ++i) pts.row(static_cast<Index>(i)) = active[i].transpose();
  const ConvexHull hull = convex_hull(pts);
  data.convex = true;
  for (Index node = 0; node < p.grid.size(); ++node) {
    if (p.mask[static_cast<std::size_t>(node)] == 0) continue;
    const Vector y = p.grid.coordinate(node);
    bool deep = true;
    for (const auto& f : hull.facets) {
      if (f.normal.dot(hull.basis.transpose() * (y - hull.origin)) > f.offset - 0.5 * spacing) deep = false;
    }
    if (deep) data.convex = false;
  }

  if (!data.nongraphical) {
    data.exact = [b](const Vector& y) {
      const double r = b->radius_at_height(std::max(0.0, y(0)));
      return std::sqrt(std::max(0.0, r * r - y(1) * y(1)));
    };
  }
  return data;
}

}  // namespace tsol
