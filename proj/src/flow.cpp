#include "tsol/flow.hpp"

#include "tsol/parallel.hpp"

#include "stencil.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsol {

namespace {

using namespace detail;

constexpr double kBlowUp = 1e12;

/// a_kl(Du) u_kl with a = I - Du Du^T / W^2.
double mcf_speed(const LocalJet& j) {
  return j.hess.trace() - j.p.dot(j.hess * j.p) / (1.0 + j.p.squaredNorm());
}

std::vector<Index> boundary_nodes(const GraphPatch& p, const Discretization& d) {
  std::vector<Index> out;
  for (Index node = 0; node < p.grid.size(); ++node) {
    if (p.active(node) && d.unknown[static_cast<std::size_t>(node)] < 0) out.push_back(node);
  }
  return out;
}

void apply_boundary(GraphPatch& p, const std::vector<Index>& nodes, const FlowOptions& options,
                    double t) {
  if (!options.boundary) return;
  for (Index node : nodes) p.values(node) = options.boundary(p.grid.coordinate(node), t);
}

void check_finite(const Vector& u) {
  for (Index i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u(i)) || std::abs(u(i)) > kBlowUp) {
      throw std::runtime_error("graph flow blew up");
    }
  }
}

class SemiImplicitStep {
 public:
  SemiImplicitStep(const GraphPatch& p, const Discretization& d, double dt)
      : disc_(d), dt_(dt), dim_(p.domain_dim()), h_(p.grid.spacing) {}

  /// Solves (I - dt L[u_old]) u_new = u_old with boundary values already in `next`.
  void advance(const Vector& old, Vector& next) {
    const auto count = static_cast<Index>(disc_.stencils.size());
    std::vector<Eigen::Triplet<double>> trip;
    Vector rhs(count);
    const double s = dt_ / (h_ * h_);
    for (Index i = 0; i < count; ++i) {
      const auto& st = disc_.stencils[static_cast<std::size_t>(i)];
      const auto j = local_jet(old, st, dim_, h_);
      const double w2 = 1.0 + j.p.squaredNorm();
      rhs(i) = old(st.node);
      const auto add = [&](Index node, double v) {
        const Index col = disc_.unknown[static_cast<std::size_t>(node)];
        if (col >= 0) {
          trip.emplace_back(i, col, v);
        } else {
          rhs(i) -= v * next(node);
        }
      };
      double centre = 1.0;
      for (Index k = 0; k < dim_; ++k) {
        const double a = 1.0 - j.p(k) * j.p(k) / w2;
        add(st.plus[k], -s * a);
        add(st.minus[k], -s * a);
        centre += 2.0 * s * a;
      }
      add(st.node, centre);
      for (Index k = 0; k < dim_; ++k) {
        for (Index l = k + 1; l < dim_; ++l) {
          const double c = -s * 2.0 * (-j.p(k) * j.p(l) / w2) / 4.0;
          const auto& m = st.mixed[pair_slot(k, l)];
          add(m[0], c);
          add(m[1], -c);
          add(m[2], -c);
          add(m[3], c);
        }
      }
    }
    Eigen::SparseMatrix<double> a(count, count);
    a.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed_) {
      lu_.analyzePattern(a);
      analyzed_ = true;
    }
    lu_.factorize(a);
    if (lu_.info() != Eigen::Success) throw std::runtime_error("semi-implicit step is singular");
    const Vector x = lu_.solve(rhs);
    for (Index i = 0; i < count; ++i) next(disc_.stencils[static_cast<std::size_t>(i)].node) = x(i);
  }

 private:
  const Discretization& disc_;
  double dt_;
  Index dim_;
  double h_;
  bool analyzed_ = false;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

}  // namespace

double cfl_limit(const GridSpec& grid) {
  return grid.spacing * grid.spacing / (2.0 * static_cast<double>(grid.dimension() + 1));
}

FlowTrajectory flow_graph_mcf(const GraphPatch& initial, double T, double dt,
                              const FlowOptions& options) {
  if (initial.direction != GraphDirection::Vertical) {
    throw std::invalid_argument("graph flow needs a vertical graph");
  }
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("flow needs T > 0 and dt > 0");
  if (options.scheme == FlowScheme::Explicit && dt > cfl_limit(initial.grid) * (1.0 + 1e-12)) {
    throw std::invalid_argument("time step violates the CFL bound h^2 / (2 (n + 1))");
  }
  if (options.snapshots < 1) throw std::invalid_argument("flow needs at least one snapshot interval");
  const auto steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  const double step = T / static_cast<double>(steps);

  const Discretization disc = discretize(initial);
  const auto bnodes = boundary_nodes(initial, disc);
  const Index dim = initial.domain_dim();
  const double h = initial.grid.spacing;

  FlowTrajectory out;
  out.dt = step;
  GraphPatch current = initial;
  apply_boundary(current, bnodes, options, 0.0);
  out.snapshots.push_back({0.0, current});

  const long every = std::max(1L, steps / options.snapshots);
  Vector next = current.values;
  SemiImplicitStep implicit(current, disc, step);
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * step;
    const Vector& u = current.values;
    next = u;
    if (options.boundary) {
      for (Index node : bnodes) next(node) = options.boundary(current.grid.coordinate(node), t);
    }
    if (options.scheme == FlowScheme::Explicit && dim == 2) {
      parallel_for(static_cast<Index>(disc.stencils.size()), [&](Index begin, Index end) {
        const double inv2h = 0.5 / h, invh2 = 1.0 / (h * h), inv4h2 = 0.25 * invh2;
        for (Index i = begin; i < end; ++i) {
          const auto& st = disc.stencils[static_cast<std::size_t>(i)];
          const double c = u(st.node);
          const double p0 = (u(st.plus[0]) - u(st.minus[0])) * inv2h;
          const double p1 = (u(st.plus[1]) - u(st.minus[1])) * inv2h;
          const double h00 = (u(st.plus[0]) - 2.0 * c + u(st.minus[0])) * invh2;
          const double h11 = (u(st.plus[1]) - 2.0 * c + u(st.minus[1])) * invh2;
          const auto& m = st.mixed[0];
          const double h01 = (u(m[0]) - u(m[1]) - u(m[2]) + u(m[3])) * inv4h2;
          const double q = p0 * p0 * h00 + 2.0 * p0 * p1 * h01 + p1 * p1 * h11;
          next(st.node) = c + step * (h00 + h11 - q / (1.0 + p0 * p0 + p1 * p1));
        }
      });
    } else if (options.scheme == FlowScheme::Explicit) {
      parallel_for(static_cast<Index>(disc.stencils.size()), [&](Index begin, Index end) {
        for (Index i = begin; i < end; ++i) {
          const auto& st = disc.stencils[static_cast<std::size_t>(i)];
          next(st.node) = u(st.node) + step * mcf_speed(local_jet(u, st, dim, h));
        }
      });
    } else {
      implicit.advance(u, next);
    }
    current.values.swap(next);
    check_finite(current.values);
    if (k % every == 0 || k == steps) {
      if (out.snapshots.back().time < t) out.snapshots.push_back({t, current});
    }
  }
  return out;
}

double translation_defect(const FlowTrajectory& flow) {
  if (flow.snapshots.size() < 2) throw std::invalid_argument("trajectory has no evolution");
  const auto& first = flow.snapshots.front();
  const auto& last = flow.snapshots.back();
  double m = 0.0;
  for (Index node = 0; node < first.patch.grid.size(); ++node) {
    if (!first.patch.active(node)) continue;
    m = std::max(m, std::abs(last.patch.values(node) - first.patch.values(node) - last.time));
  }
  return m;
}

double SphereFlow::radius(double t) const {
  const double r2 = r0 * r0 - 2.0 * static_cast<double>(n) * t;
  if (!(r2 > 0.0)) throw std::invalid_argument("sphere is extinct at this time");
  return std::sqrt(r2);
}

namespace {

DistanceTrack finish(DistanceTrack track, double tolerance) {
  track.tolerance = tolerance;
  for (std::size_t k = 1; k < track.distances.size(); ++k) {
    track.max_decrease = std::max(track.max_decrease, track.distances[k - 1] - track.distances[k]);
  }
  track.monotone = track.max_decrease <= track.tolerance;
  return track;
}

}  // namespace

DistanceTrack comparison_distance_track(const SphereFlow& compact, const FlowTrajectory& other,
                                        double constant) {
  DistanceTrack track;
  for (const auto& snap : other.snapshots) {
    const double r = compact.radius(snap.time);
    double d = std::numeric_limits<double>::infinity();
    for (Index node = 0; node < snap.patch.grid.size(); ++node) {
      if (!snap.patch.active(node)) continue;
      d = std::min(d, (Vector(snap.patch.point(node)) - compact.center).norm() - r);
    }
    if (d < 0.0) throw std::invalid_argument("sphere meets the graph");
    track.times.push_back(snap.time);
    track.distances.push_back(d);
  }
  const double h = other.spacing();
  return finish(std::move(track), constant * (other.dt + h * h));
}

DistanceTrack comparison_distance_track(const FlowTrajectory& a, const FlowTrajectory& b,
                                        double constant) {
  if (a.snapshots.size() != b.snapshots.size()) throw std::invalid_argument("trajectories differ in length");
  DistanceTrack track;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    const auto& pa = a.snapshots[k];
    const auto& pb = b.snapshots[k];
    if (std::abs(pa.time - pb.time) > 1e-12 * std::max(1.0, pa.time)) {
      throw std::invalid_argument("trajectories are not synchronized");
    }
    double d = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < pa.patch.grid.size(); ++i) {
      if (!pa.patch.active(i)) continue;
      const Vector p = pa.patch.point(i);
      for (Index j = 0; j < pb.patch.grid.size(); ++j) {
        if (pb.patch.active(j)) d = std::min(d, (Vector(pb.patch.point(j)) - p).norm());
      }
    }
    track.times.push_back(pa.time);
    track.distances.push_back(d);
  }
  const double h = std::max(a.spacing(), b.spacing());
  return finish(std::move(track), constant * (std::max(a.dt, b.dt) + h * h));
}

}  // namespace tsol
