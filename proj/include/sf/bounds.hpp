#pragma once

// Closed-form tail and norm bounds used by the estimators' analysis, plus
// brute-force reference implementations that the estimators are checked
// against. The oracles share no code with the estimator modules.

#include "sf/core.hpp"

#include <cstddef>

namespace sf {

struct BoundReport {
  double bound_value = 0.0;
  double empirical_value = 0.0;
  /// Three-sigma Monte Carlo half-width of empirical_value (0 for exact checks).
  double half_width = 0.0;
  std::size_t trials = 0;
  /// empirical_value <= bound_value (>= for lower bounds such as the cone check).
  bool holds = false;
  /// empirical_value <= bound_value + half_width.
  bool holds_with_slack = false;
};

BoundReport make_bound_report(double bound, double empirical, double half_width,
                              std::size_t trials);

/// P(eta >= d + x) <= exp(-x min(x, 4d) / (16 d)) for eta ~ chi^2_d.
double chi2_tail_bound(std::size_t d, double x);

/// E[eta 1{eta >= d + x}] <= 2d exp(-x^2 / 32d) for x < 4d, 2x exp(-x/4) otherwise.
/// Requires d >= 2.
double chi2_truncated_mean_bound(std::size_t d, double x);

/// 2p + 16 log(n / delta): high-probability bound on max_i ||(Xi Pi)_i||^2.
double centered_column_norm_bound(std::size_t p, std::size_t n, double delta);

struct GaussianNormBounds {
  /// sqrt(N) + sqrt(n) + t.
  double deviation_bound;
  /// 3N + 3n + 12, bound on E||A||^2.
  double expectation_sq_bound;
  /// 2 exp(-t^2 / 2); may exceed 1.
  double failure_probability;
};

GaussianNormBounds gaussian_matrix_norm_bounds(std::size_t rows, std::size_t cols, double t);

/// Checks ||U Pi||_F^2 >= (1 - (1 + a)^2 |S| / n) ||U||_F^2 (relative tolerance
/// 1e-9) for U obeying the cone condition sum_{i not in S} ||u_i|| <= a sum_{i in S} ||u_i||.
/// Throws InvalidArgument when the cone condition fails.
BoundReport projection_cone_check(const Matrix& u, const SparsityPattern& support, double a);

struct EnvelopeValue {
  double value;
  /// eps0^2 <= p, n >= 33 s and a <= sqrt(p)/2.
  bool applicable;
};

/// max{ sqrt(p) (33^2 s^2 / n^2)^(1 - 2^-k), 2a }.
EnvelopeValue recursion_envelope(double eps0, std::size_t s, std::size_t n, std::size_t p,
                                 double a, std::size_t k);

/// Minimizes ||Z - t||^2 + lambda ||t|| numerically: bisection on the slope of
/// the objective along Z / ||Z||, bracketed by [0, ||Z||].
Vector prox_grouplasso_numeric(const Vector& z, double lambda, double tol = 1e-12);

struct GssReference {
  Vector estimate;
  SparsityPattern support;
};

/// Greedy subset selection by full 2^n enumeration per round; selects the
/// minimum-cardinality passing set, lexicographically first. Requires n <= 14.
GssReference gss_bruteforce(const Matrix& y, double sigma, double lambda);

}  // namespace sf
