#pragma once

// Estimation of a common mean mu from Y_i = mu + theta_i + sigma * xi_i when at
// most s of the theta_i (the outliers) are nonzero.

#include "sf/core.hpp"

#include <cstddef>
#include <vector>

namespace sf {

struct RobustInstanceView {
  const Matrix& y;
  double sigma;
  /// Assumed number of outliers s.
  std::size_t outliers;
  double delta;

  /// Validates the view; returns sparsity_guard_violated when s > n/32.
  std::vector<Warning> check() const;
};

Vector sample_mean(const Matrix& y);

/// Row-wise median; midpoint of the two central order statistics for even n.
Vector coordinatewise_median(const Matrix& y);

/// lambda with lambda^2 = 32 sigma^2 p + 256 sigma^2 log(n / delta).
double group_lasso_lambda(double sigma, std::size_t p, std::size_t n, double delta);

struct GroupLassoOptions {
  /// Stop once the relative objective decrease falls below this...
  double tol = 1e-10;
  /// ...and the first-order residual is below this.
  double kkt_tol = 1e-8;
  std::size_t max_iter = 10000;
};

struct GroupLassoResult {
  Vector mu_hat;
  Matrix theta_hat;
  double objective = 0.0;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// sum_i ||Y_i - m - t_i||^2 + lambda sum_i ||t_i||.
double group_lasso_objective(const Matrix& y, const Vector& m, const Matrix& t, double lambda);

/// Largest violation of the first-order conditions of the group-lasso problem
/// in the theta blocks, evaluated at (mu, theta).
double group_lasso_kkt_residual(const Matrix& y, const Vector& mu, const Matrix& theta,
                                double lambda);

/// Minimizes the group-lasso profile objective by exact two-block alternation:
/// theta_i <- group soft threshold of (Y_i - m) at radius lambda/2, then
/// m <- mean of (Y - Theta). The returned mu_hat always equals
/// L_n(Y) - L_n(Theta_hat). Non-convergence is reported, not thrown.
GroupLassoResult group_lasso_fit(const RobustInstanceView& view, double lambda,
                                 const GroupLassoOptions& options = {});

/// Z (1 - sigma gamma / (||Z||^2 - (n-1)/n sigma^2 p)_+^{1/2})_+ with p = Z.size().
Vector robust_shrink(const Vector& z, double sigma, double gamma, std::size_t n);

/// sqrt(8 eps^2 + 4 sqrt(4 eps^4 + p eps^2)).
double ist_gamma(double epsilon, std::size_t p);

struct IstEpsilon {
  /// (4/n)(s gamma + s + sqrt(s p) + sqrt(2 s log(4/delta))).
  double value;
  /// The gamma-free part (4/n)(s + sqrt(s p) + sqrt(2 s log(4/delta))).
  double a;
};

IstEpsilon ist_epsilon_a(std::size_t s, std::size_t n, std::size_t p, double gamma,
                         double delta);

/// gamma^2 threshold 4 log(4n/delta) + 4 sqrt(p log(4n/delta)) above which the
/// one-step shrinkage guarantee applies.
double ist_gamma_condition(std::size_t p, std::size_t n, double delta);

struct IstState {
  std::size_t iteration = 0;
  /// Error bound that set gamma in this iteration.
  double epsilon = 0.0;
  double gamma = 0.0;
  /// L_n(Theta_hat) at the start of the iteration.
  Vector l_hat;
  /// Error bound after the iteration's update.
  double epsilon_next = 0.0;
};

struct IstResult {
  EstimateResult l_hat;
  EstimateResult mu_hat;
  std::vector<IstState> trace;
  /// eps_0, ..., eps_N.
  std::vector<double> epsilons;
  double initial_lambda = 0.0;
  double a = 0.0;
  GroupLassoResult initial_fit;
};

/// Iterative soft thresholding, started from the group-lasso fit at
/// lambda^2 = 32 sigma^2 (p + 8 log(n/delta)) and run for `iterations` steps.
IstResult ist_estimate(const RobustInstanceView& view, std::size_t iterations,
                       const GroupLassoOptions& options = {});

struct RobustTruth {
  const Vector& mu;
  const Matrix& theta;
};

struct GroupLassoBoundCheck {
  bool theta_frobenius = false;
  bool functional = false;
  bool mean = false;
  bool guard_violated = false;

  bool all() const { return theta_frobenius && functional && mean; }
};

/// Evaluates, for one simulated trial, the three high-probability bounds
/// ||Theta - Theta_hat||_F^2 <= 9 s lambda^2,
/// ||L_n(Theta_hat) - L_n(Theta)||^2 <= 288 s^2 lambda^2 / n^2, and
/// ||mu_hat - mu||^2 <= 288 s^2 lambda^2 / n^2 + 4 sigma^2 p / n + 8 sigma^2 log(2/delta) / n.
GroupLassoBoundCheck group_lasso_mu_deviation_check(const GroupLassoResult& result,
                                                    const RobustTruth& truth, double lambda,
                                                    std::size_t s, double sigma, double delta);

/// Right-hand side of the mean bound above.
double group_lasso_mean_bound(double lambda, std::size_t s, std::size_t p, std::size_t n,
                              double sigma, double delta);

}  // namespace sf
