#pragma once

// Orthonormal basis of the directions allowed by a set of equality rows.

#include <cstddef>
#include <span>
#include <vector>

#include "mcda/linprog.hpp"

namespace mcda::detail {

struct AffineHull {
  std::size_t ambient = 0;
  std::size_t rank = 0;           // dimension of the hull
  std::vector<double> basis;      // column-major, ambient x rank, orthonormal columns

  /// Norm of the projection of a onto the hull directions.
  double projected_norm(std::span<const double> a) const;
  /// out = basis * coords.
  void expand(std::span<const double> coords, std::span<double> out) const;
  /// Moves x onto the hull through anchor (x - anchor projected on the basis).
  void reproject(std::span<const double> anchor, std::span<double> x) const;
};

AffineHull affine_hull(std::span<const Constraint* const> equalities, std::size_t ambient);

}  // namespace mcda::detail
