#include "tsol/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace tsol {

GridSpec::GridSpec(Vector origin_, double spacing_, std::vector<Index> dims_)
    : origin(std::move(origin_)), spacing(spacing_), dims(std::move(dims_)) {
  if (!(spacing > 0.0)) {
    throw std::invalid_argument("grid spacing must be positive");
  }
  if (dims.empty() || dimension() > kMaxGridDim) {
    throw std::invalid_argument("grid dimension must be between 1 and 3");
  }
  if (origin.size() != dimension()) {
    throw std::invalid_argument("grid origin does not match grid dimension");
  }
  for (Index d : dims) {
    if (d < 1) throw std::invalid_argument("grid extents must be positive");
  }
}

GridSpec GridSpec::box(const Vector& lo, const Vector& hi, double spacing) {
  std::vector<Index> dims(static_cast<std::size_t>(lo.size()));
  for (Index a = 0; a < lo.size(); ++a) {
    dims[static_cast<std::size_t>(a)] =
        static_cast<Index>(std::llround((hi(a) - lo(a)) / spacing)) + 1;
  }
  return GridSpec(lo, spacing, std::move(dims));
}

Index GridSpec::size() const {
  Index total = 1;
  for (Index d : dims) total *= d;
  return total;
}

Index GridSpec::stride(Index axis) const {
  Index s = 1;
  for (Index a = 0; a < axis; ++a) s *= dims[static_cast<std::size_t>(a)];
  return s;
}

std::array<Index, kMaxGridDim> GridSpec::unravel(Index linear) const {
  std::array<Index, kMaxGridDim> multi{};
  for (std::size_t a = 0; a < dims.size(); ++a) {
    multi[a] = linear % dims[a];
    linear /= dims[a];
  }
  return multi;
}

Index GridSpec::linear(std::span<const Index> multi) const {
  Index lin = 0;
  for (std::size_t a = dims.size(); a-- > 0;) lin = lin * dims[a] + multi[a];
  return lin;
}

Vector GridSpec::coordinate(Index linear) const {
  const auto multi = unravel(linear);
  Vector x(dimension());
  for (Index a = 0; a < dimension(); ++a) {
    x(a) = origin(a) + spacing * static_cast<double>(multi[static_cast<std::size_t>(a)]);
  }
  return x;
}

std::optional<Index> GridSpec::shifted(Index linear, Index axis, Index offset) const {
  const Index s = stride(axis);
  const Index coord = (linear / s) % dims[static_cast<std::size_t>(axis)];
  const Index moved = coord + offset;
  if (moved < 0 || moved >= dims[static_cast<std::size_t>(axis)]) return std::nullopt;
  return linear + offset * s;
}

}  // namespace tsol
