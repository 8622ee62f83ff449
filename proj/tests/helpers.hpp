#pragma once

#include "sf/core.hpp"
#include "sf/rng.hpp"

#include <initializer_list>

namespace sf::test {

/// Builds a matrix from a list of columns.
inline Matrix from_columns(std::initializer_list<std::initializer_list<double>> cols) {
  const auto n = static_cast<Eigen::Index>(cols.size());
  const auto p = static_cast<Eigen::Index>(cols.begin()->size());
  Matrix m(p, n);
  Eigen::Index i = 0;
  for (const auto& col : cols) {
    Eigen::Index j = 0;
    for (double v : col) m(j++, i) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index j = 0;
  for (double x : values) v(j++) = x;
  return v;
}

inline Matrix gaussian_matrix(std::size_t p, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  Matrix m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
  rng.fill_gaussian(m);
  return m;
}

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace sf::test
