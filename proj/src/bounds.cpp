#include "sf/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sf {

BoundReport make_bound_report(double bound, double empirical, double half_width,
                              std::size_t trials) {
  BoundReport r;
  r.bound_value = bound;
  r.empirical_value = empirical;
  r.half_width = half_width;
  r.trials = trials;
  r.holds = empirical <= bound;
  r.holds_with_slack = empirical <= bound + half_width;
  return r;
}

double chi2_tail_bound(std::size_t d, double x) {
  if (d < 1) throw InvalidArgument("chi2_tail_bound: d must be at least 1");
  require_positive(x, "x");
  const double dd = static_cast<double>(d);
  return std::exp(-x * std::min(x, 4.0 * dd) / (16.0 * dd));
}

double chi2_truncated_mean_bound(std::size_t d, double x) {
  if (d < 2) throw InvalidArgument("chi2_truncated_mean_bound: d must be at least 2");
  require_positive(x, "x");
  const double dd = static_cast<double>(d);
  if (x < 4.0 * dd) return 2.0 * dd * std::exp(-x * x / (32.0 * dd));
  return 2.0 * x * std::exp(-x / 4.0);
}

double centered_column_norm_bound(std::size_t p, std::size_t n, double delta) {
  if (n < 2) throw InvalidArgument("centered_column_norm_bound: needs n >= 2");
  require_open_unit(delta, "delta");
  return 2.0 * static_cast<double>(p) + 16.0 * std::log(static_cast<double>(n) / delta);
}

GaussianNormBounds gaussian_matrix_norm_bounds(std::size_t rows, std::size_t cols, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("gaussian_matrix_norm_bounds: t must be nonnegative");
  const double r = static_cast<double>(rows);
  const double c = static_cast<double>(cols);
  return {std::sqrt(r) + std::sqrt(c) + t, 3.0 * r + 3.0 * c + 12.0,
          2.0 * std::exp(-t * t / 2.0)};
}

BoundReport projection_cone_check(const Matrix& u, const SparsityPattern& support, double a) {
  validate_matrix(u, "U");
  require_positive(a, "a");
  const auto n = static_cast<std::size_t>(u.cols());
  if (support.universe() != n) {
    throw InvalidArgument("projection_cone_check: support universe does not match U");
  }
  double on_support = 0.0;
  double off_support = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = u.col(static_cast<Eigen::Index>(i)).norm();
    (support.contains(i) ? on_support : off_support) += norm;
  }
  if (off_support > a * on_support * (1.0 + 1e-12)) {
    throw InvalidArgument("projection_cone_check: U violates the cone condition");
  }

  // U Pi written out explicitly: subtract the row means.
  Matrix projected = u;
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double row_mean = u.row(j).sum() / static_cast<double>(n);
    projected.row(j).array() -= row_mean;
  }
  const double lhs = projected.squaredNorm();
  const double factor = 1.0 - (1.0 + a) * (1.0 + a) * static_cast<double>(support.size()) /
                                  static_cast<double>(n);
  const double rhs = factor * u.squaredNorm();
  const double slack = 1e-9 * std::max(std::abs(rhs), u.squaredNorm());
  // Lower bound on the projected energy, so the comparison is reversed.
  BoundReport r;
  r.bound_value = rhs;
  r.empirical_value = lhs;
  r.trials = 1;
  r.holds = lhs >= rhs - slack;
  r.holds_with_slack = r.holds;
  return r;
}

EnvelopeValue recursion_envelope(double eps0, std::size_t s, std::size_t n, std::size_t p,
                                 double a, std::size_t k) {
  const double pd = static_cast<double>(p);
  const double ratio = 33.0 * 33.0 * static_cast<double>(s) * static_cast<double>(s) /
                       (static_cast<double>(n) * static_cast<double>(n));
  const double exponent = 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 1000)));
  const double value = std::max(std::sqrt(pd) * std::pow(ratio, exponent), 2.0 * a);
  const bool applicable = eps0 * eps0 <= pd && n >= 33 * s && a <= 0.5 * std::sqrt(pd);
  return {value, applicable};
}

Vector prox_grouplasso_numeric(const Vector& z, double lambda, double tol) {
  if (!(lambda >= 0.0)) throw InvalidArgument("prox_grouplasso_numeric: lambda must be nonnegative");
  require_positive(tol, "tol");
  const double zn = z.norm();
  if (zn == 0.0) return Vector::Zero(z.size());

  // Objective restricted to t = r Z / ||Z||, r in [0, ||Z||], is convex with
  // slope 2 (r - ||Z||) + lambda; bisect on the sign of the slope.
  const auto slope = [&](double r) { return 2.0 * (r - zn) + lambda; };
  if (slope(0.0) >= 0.0) return Vector::Zero(z.size());
  if (lambda == 0.0) return z;
  double lo = 0.0;
  double hi = zn;
  while (hi - lo > tol * std::max(1.0, zn)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  const double best = 0.5 * (lo + hi);
  return (best / zn) * z;
}

GssReference gss_bruteforce(const Matrix& y, double sigma, double lambda) {
  validate_matrix(y, "Y");
  require_positive(sigma, "sigma");
  require_positive(lambda, "lambda");
  const auto n = static_cast<std::size_t>(y.cols());
  if (n > 14) throw InvalidArgument("gss_bruteforce: n > 14 is not supported");
  const double pd = static_cast<double>(y.rows());

  const auto members = [n](std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) out.push_back(i);
    }
    return out;
  };

  std::uint32_t available = (n == 32) ? ~0u : ((1u << n) - 1u);
  std::uint32_t chosen_all = 0;
  while (available != 0) {
    bool found = false;
    std::uint32_t best = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if ((mask & ~available) != 0) continue;
      const double k = static_cast<double>(std::popcount(mask));
      Vector total = Vector::Zero(y.rows());
      for (std::size_t i : members(mask)) total += y.col(static_cast<Eigen::Index>(i));
      if (total.squaredNorm() < 12.0 * sigma * sigma * (k * pd + lambda * k * k)) continue;
      if (!found) {
        best = mask;
        found = true;
        continue;
      }
      const int size_new = std::popcount(mask);
      const int size_best = std::popcount(best);
      if (size_new < size_best || (size_new == size_best && members(mask) < members(best))) {
        best = mask;
      }
    }
    if (!found) break;
    chosen_all |= best;
    available &= ~best;
  }

  GssReference ref{Vector::Zero(y.rows()), SparsityPattern(n, members(chosen_all))};
  for (std::size_t i : ref.support.indices()) ref.estimate += y.col(static_cast<Eigen::Index>(i));
  return ref;
}

}  // namespace sf
