#include "affine_hull.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace mcda::detail {

double AffineHull::projected_norm(std::span<const double> a) const {
  double total = 0.0;
  for (std::size_t c = 0; c < rank; ++c) {
    const double* col = basis.data() + c * ambient;
    double dot = 0.0;
    for (std::size_t i = 0; i < ambient; ++i) dot += col[i] * a[i];
    total += dot * dot;
  }
  return std::sqrt(total);
}

void AffineHull::expand(std::span<const double> coords, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t c = 0; c < rank; ++c) {
    const double* col = basis.data() + c * ambient;
    const double w = coords[c];
    for (std::size_t i = 0; i < ambient; ++i) out[i] += w * col[i];
  }
}

void AffineHull::reproject(std::span<const double> anchor, std::span<double> x) const {
  std::vector<double> delta(ambient);
  for (std::size_t i = 0; i < ambient; ++i) delta[i] = x[i] - anchor[i];
  std::vector<double> coords(rank, 0.0);
  for (std::size_t c = 0; c < rank; ++c) {
    const double* col = basis.data() + c * ambient;
    for (std::size_t i = 0; i < ambient; ++i) coords[c] += col[i] * delta[i];
  }
  expand(coords, x);
  for (std::size_t i = 0; i < ambient; ++i) x[i] += anchor[i];
}

AffineHull affine_hull(std::span<const Constraint* const> equalities, std::size_t ambient) {
  AffineHull hull;
  hull.ambient = ambient;
  if (equalities.empty()) {
    hull.rank = ambient;
    hull.basis.assign(ambient * ambient, 0.0);
    for (std::size_t i = 0; i < ambient; ++i) hull.basis[i * ambient + i] = 1.0;
    return hull;
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(equalities.size()), static_cast<Eigen::Index>(ambient));
  for (std::size_t r = 0; r < equalities.size(); ++r) {
    for (std::size_t c = 0; c < ambient; ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = equalities[r]->coefficients[c];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  std::size_t row_rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++row_rank;
  }
  hull.rank = ambient - row_rank;
  hull.basis.resize(ambient * hull.rank);
  const Eigen::MatrixXd& v = svd.matrixV();
  for (std::size_t c = 0; c < hull.rank; ++c) {
    for (std::size_t i = 0; i < ambient; ++i) {
      hull.basis[c * ambient + i] =
          v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(row_rank + c));
    }
  }
  return hull;
}

}  // namespace mcda::detail
