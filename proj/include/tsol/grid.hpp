#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace tsol {

using Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Graph patches live on grids of dimension at most 3, so ambient points have at most
/// 4 coordinates. Fixed upper bounds keep per-node arithmetic off the heap.
inline constexpr Index kMaxGridDim = 3;
using LocalVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxGridDim + 1, 1>;
using LocalMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxGridDim, kMaxGridDim>;

/// Uniform Cartesian grid over a box in R^n. Node (i_0, ..., i_{n-1}) sits at
/// origin + spacing * i; axis 0 varies fastest in the linear index.
struct GridSpec {
  Vector origin;
  double spacing = 0.0;
  std::vector<Index> dims;

  GridSpec() = default;
  GridSpec(Vector origin, double spacing, std::vector<Index> dims);

  /// Grid covering [lo, hi] in every axis with the given spacing (hi is rounded to
  /// the nearest node).
  static GridSpec box(const Vector& lo, const Vector& hi, double spacing);

  Index dimension() const { return static_cast<Index>(dims.size()); }
  Index size() const;
  Index stride(Index axis) const;

  std::array<Index, kMaxGridDim> unravel(Index linear) const;
  Index linear(std::span<const Index> multi) const;
  Vector coordinate(Index linear) const;

  /// Linear index of the node shifted by `offset` along `axis`, or nullopt when it
  /// leaves the grid.
  std::optional<Index> shifted(Index linear, Index axis, Index offset) const;
};

}  // namespace tsol
