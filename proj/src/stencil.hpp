#pragma once

#include "tsol/geometry.hpp"

#include <array>
#include <vector>

namespace tsol::detail {

struct NodeStencil {
  Index node;
  std::array<Index, kMaxGridDim> plus{}, minus{};
  // mixed neighbours for axis pairs (0,1), (0,2), (1,2): ++, +-, -+, --
  std::array<std::array<Index, 4>, 3> mixed{};
};

inline int pair_slot(Index k, Index l) { return static_cast<int>(k + l - 1); }

struct Discretization {
  std::vector<NodeStencil> stencils;  // one per unknown
  std::vector<Index> unknown;         // node -> unknown index or -1
};

inline Discretization discretize(const GraphPatch& patch) {
  const Index dim = patch.domain_dim();
  Discretization d;
  d.unknown.assign(static_cast<std::size_t>(patch.grid.size()), -1);
  for (Index node = 0; node < patch.grid.size(); ++node) {
    if (!patch.active(node) || !has_full_stencil(patch, node)) continue;
    NodeStencil s;
    s.node = node;
    for (Index k = 0; k < dim; ++k) {
      s.plus[k] = *patch.grid.shifted(node, k, 1);
      s.minus[k] = *patch.grid.shifted(node, k, -1);
    }
    for (Index k = 0; k < dim; ++k) {
      for (Index l = k + 1; l < dim; ++l) {
        auto& m = s.mixed[pair_slot(k, l)];
        m[0] = *patch.grid.shifted(s.plus[k], l, 1);
        m[1] = *patch.grid.shifted(s.plus[k], l, -1);
        m[2] = *patch.grid.shifted(s.minus[k], l, 1);
        m[3] = *patch.grid.shifted(s.minus[k], l, -1);
      }
    }
    d.unknown[static_cast<std::size_t>(node)] = static_cast<Index>(d.stencils.size());
    d.stencils.push_back(s);
  }
  return d;
}

struct LocalJet {
  LocalVector p;
  LocalMatrix hess;
};

inline LocalJet local_jet(const Vector& u, const NodeStencil& s, Index dim, double h) {
  LocalJet j;
  j.p.resize(dim);
  j.hess.resize(dim, dim);
  const double c = u(s.node);
  for (Index k = 0; k < dim; ++k) {
    j.p(k) = (u(s.plus[k]) - u(s.minus[k])) / (2.0 * h);
    j.hess(k, k) = (u(s.plus[k]) - 2.0 * c + u(s.minus[k])) / (h * h);
  }
  for (Index k = 0; k < dim; ++k) {
    for (Index l = k + 1; l < dim; ++l) {
      const auto& m = s.mixed[pair_slot(k, l)];
      j.hess(k, l) = j.hess(l, k) = (u(m[0]) - u(m[1]) - u(m[2]) + u(m[3])) / (4.0 * h * h);
    }
  }
  return j;
}

}  // namespace tsol::detail
