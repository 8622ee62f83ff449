#include "sf/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sf {

namespace {

// Group soft threshold: argmin_t ||r - t||^2 + lambda ||t||.
void group_soft_threshold(const Eigen::Ref<const Vector>& r, double lambda,
                          Eigen::Ref<Vector> out) {
  const double norm = r.norm();
  if (norm == 0.0 || lambda >= 2.0 * norm) {
    out.setZero();
    return;
  }
  out = (1.0 - lambda / (2.0 * norm)) * r;
}

}  // namespace

std::vector<Warning> RobustInstanceView::check() const {
  validate_matrix(y, "Y");
  require_positive(sigma, "sigma");
  require_open_unit(delta, "delta");
  const auto n = static_cast<std::size_t>(y.cols());
  if (outliers > n) throw InvalidArgument("robust view: assumed outlier count exceeds n");
  std::vector<Warning> warnings;
  if (32 * outliers > n) warnings.push_back(Warning::sparsity_guard_violated);
  return warnings;
}

Vector sample_mean(const Matrix& y) {
  validate_matrix(y, "Y");
  return normalized_functional(y);
}

Vector coordinatewise_median(const Matrix& y) {
  validate_matrix(y, "Y");
  const auto n = static_cast<std::size_t>(y.cols());
  Vector med(y.rows());
  std::vector<double> row(n);
  for (Eigen::Index j = 0; j < y.rows(); ++j) {
    for (std::size_t i = 0; i < n; ++i) row[i] = y(j, static_cast<Eigen::Index>(i));
    const auto upper = row.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(row.begin(), upper, row.end());
    if (n % 2 == 1) {
      med[j] = *upper;
    } else {
      const double lower = *std::max_element(row.begin(), upper);
      med[j] = 0.5 * (lower + *upper);
    }
  }
  return med;
}

double group_lasso_lambda(double sigma, std::size_t p, std::size_t n, double delta) {
  require_positive(sigma, "sigma");
  require_open_unit(delta, "delta");
  const double pd = static_cast<double>(p);
  return std::sqrt(32.0 * sigma * sigma * pd +
                   256.0 * sigma * sigma * std::log(static_cast<double>(n) / delta));
}

double group_lasso_objective(const Matrix& y, const Vector& m, const Matrix& t, double lambda) {
  const double fit = ((y - t).colwise() - m).squaredNorm();
  return fit + lambda * t.colwise().norm().sum();
}

double group_lasso_kkt_residual(const Matrix& y, const Vector& mu, const Matrix& theta,
                                double lambda) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    const double theta_norm = theta.col(i).norm();
    double violation = 0.0;
    if (theta_norm > 0.0) {
      const Vector grad =
          -2.0 * (y.col(i) - mu - theta.col(i)) + (lambda / theta_norm) * theta.col(i);
      violation = grad.norm();
    } else {
      violation = std::max(0.0, 2.0 * (y.col(i) - mu).norm() - lambda);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

GroupLassoResult group_lasso_fit(const RobustInstanceView& view, double lambda,
                                 const GroupLassoOptions& options) {
  view.check();
  require_positive(lambda, "lambda");
  const Matrix& y = view.y;
  if (y.cols() < 2) throw InvalidArgument("group_lasso_fit: needs n >= 2");

  const Vector y_mean = normalized_functional(y);
  GroupLassoResult r;
  r.theta_hat = Matrix::Zero(y.rows(), y.cols());
  r.mu_hat = y_mean;
  double previous = group_lasso_objective(y, r.mu_hat, r.theta_hat, lambda);
  r.objective = previous;

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    for (Eigen::Index i = 0; i < y.cols(); ++i) {
      group_soft_threshold(y.col(i) - r.mu_hat, lambda, r.theta_hat.col(i));
    }
    r.mu_hat = y_mean - normalized_functional(r.theta_hat);
    r.objective = group_lasso_objective(y, r.mu_hat, r.theta_hat, lambda);
    r.iterations = it;

    const double scale = std::max(std::abs(previous), std::numeric_limits<double>::min());
    const double relative_decrease = (previous - r.objective) / scale;
    previous = r.objective;
    if (relative_decrease < options.tol) {
      r.kkt_residual = group_lasso_kkt_residual(y, r.mu_hat, r.theta_hat, lambda);
      if (r.kkt_residual <= options.kkt_tol) {
        r.converged = true;
        return r;
      }
    }
  }
  r.kkt_residual = group_lasso_kkt_residual(y, r.mu_hat, r.theta_hat, lambda);
  return r;
}

Vector robust_shrink(const Vector& z, double sigma, double gamma, std::size_t n) {
  if (n < 2) throw InvalidArgument("robust_shrink: needs n >= 2");
  const double nd = static_cast<double>(n);
  const double noise_level = (nd - 1.0) / nd * sigma * sigma * static_cast<double>(z.size());
  const double excess = z.squaredNorm() - noise_level;
  if (excess <= 0.0) return Vector::Zero(z.size());
  const double factor = 1.0 - sigma * gamma / std::sqrt(excess);
  if (factor <= 0.0) return Vector::Zero(z.size());
  return factor * z;
}

double ist_gamma(double epsilon, std::size_t p) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("ist_gamma: epsilon must be nonnegative");
  const double e2 = epsilon * epsilon;
  return std::sqrt(8.0 * e2 + 4.0 * std::sqrt(4.0 * e2 * e2 + static_cast<double>(p) * e2));
}

IstEpsilon ist_epsilon_a(std::size_t s, std::size_t n, std::size_t p, double gamma,
                         double delta) {
  require_open_unit(delta, "delta");
  const double sd = static_cast<double>(s);
  const double scale = 4.0 / static_cast<double>(n);
  const double a = scale * (sd + std::sqrt(sd * static_cast<double>(p)) +
                            std::sqrt(2.0 * sd * std::log(4.0 / delta)));
  return {a + scale * sd * gamma, a};
}

double ist_gamma_condition(std::size_t p, std::size_t n, double delta) {
  const double l = std::log(4.0 * static_cast<double>(n) / delta);
  return 4.0 * l + 4.0 * std::sqrt(static_cast<double>(p) * l);
}

IstResult ist_estimate(const RobustInstanceView& view, std::size_t iterations,
                       const GroupLassoOptions& options) {
  const std::vector<Warning> view_warnings = view.check();
  const Matrix& y = view.y;
  if (y.cols() < 2) throw InvalidArgument("ist_estimate: needs n >= 2");
  const auto p = static_cast<std::size_t>(y.rows());
  const auto n = static_cast<std::size_t>(y.cols());
  const double nd = static_cast<double>(n);

  IstResult out;
  for (Warning w : view_warnings) {
    out.l_hat.add_warning(w);
    out.mu_hat.add_warning(w);
  }

  if (view.outliers == 0) {
    out.mu_hat.estimate = sample_mean(y);
    out.l_hat.estimate = Vector::Zero(y.rows());
    out.mu_hat.add_warning(Warning::no_outliers_declared);
    out.l_hat.add_warning(Warning::no_outliers_declared);
    return out;
  }

  out.initial_lambda = std::sqrt(32.0 * view.sigma * view.sigma *
                                 (static_cast<double>(p) + 8.0 * std::log(nd / view.delta)));
  out.initial_fit = group_lasso_fit(view, out.initial_lambda, options);
  if (!out.initial_fit.converged) {
    out.l_hat.add_warning(Warning::group_lasso_not_converged);
    out.mu_hat.add_warning(Warning::group_lasso_not_converged);
  }

  const double sd = static_cast<double>(view.outliers);
  double epsilon = std::sqrt(288.0) * sd * out.initial_lambda / (nd * view.sigma);
  out.epsilons.push_back(epsilon);
  out.a = ist_epsilon_a(view.outliers, n, p, 0.0, view.delta).a;

  const bool envelope_applicable = epsilon * epsilon <= static_cast<double>(p) &&
                                   n >= 33 * view.outliers &&
                                   out.a <= 0.5 * std::sqrt(static_cast<double>(p));
  if (!envelope_applicable) out.mu_hat.add_warning(Warning::envelope_inapplicable);

  const Matrix centered = center_columns(y);
  const double gamma_floor = ist_gamma_condition(p, n, view.delta);
  Matrix theta = out.initial_fit.theta_hat;
  Vector z(y.rows());

  for (std::size_t k = 1; k <= iterations; ++k) {
    IstState state;
    state.iteration = k;
    state.epsilon = epsilon;
    state.l_hat = normalized_functional(theta);
    state.gamma = ist_gamma(epsilon, p);
    if (state.gamma * state.gamma <= gamma_floor) {
      out.l_hat.add_warning(Warning::ist_gamma_condition_unmet);
      out.mu_hat.add_warning(Warning::ist_gamma_condition_unmet);
    }
    for (Eigen::Index i = 0; i < y.cols(); ++i) {
      z = centered.col(i) + state.l_hat;
      theta.col(i) = robust_shrink(z, view.sigma, state.gamma, n);
    }
    epsilon = ist_epsilon_a(view.outliers, n, p, state.gamma, view.delta).value;
    state.epsilon_next = epsilon;
    out.epsilons.push_back(epsilon);
    out.trace.push_back(std::move(state));
  }

  out.l_hat.estimate = normalized_functional(theta);
  out.mu_hat.estimate = normalized_functional(y) - out.l_hat.estimate;
  out.l_hat.iterations = iterations;
  out.mu_hat.iterations = iterations;
  return out;
}

double group_lasso_mean_bound(double lambda, std::size_t s, std::size_t p, std::size_t n,
                              double sigma, double delta) {
  const double nd = static_cast<double>(n);
  const double sd = static_cast<double>(s);
  const double s2 = sigma * sigma;
  return 288.0 * sd * sd * lambda * lambda / (nd * nd) + 4.0 * s2 * static_cast<double>(p) / nd +
         8.0 * s2 * std::log(2.0 / delta) / nd;
}

GroupLassoBoundCheck group_lasso_mu_deviation_check(const GroupLassoResult& result,
                                                    const RobustTruth& truth, double lambda,
                                                    std::size_t s, double sigma, double delta) {
  const auto p = static_cast<std::size_t>(truth.theta.rows());
  const auto n = static_cast<std::size_t>(truth.theta.cols());
  const double nd = static_cast<double>(n);
  const double sd = static_cast<double>(s);
  const double l2 = lambda * lambda;

  GroupLassoBoundCheck check;
  check.guard_violated = 32 * s > n;
  check.theta_frobenius = (truth.theta - result.theta_hat).squaredNorm() <= 9.0 * sd * l2;
  check.functional =
      (normalized_functional(result.theta_hat) - normalized_functional(truth.theta)).squaredNorm() <=
      288.0 * sd * sd * l2 / (nd * nd);
  check.mean = (result.mu_hat - truth.mu).squaredNorm() <=
               group_lasso_mean_bound(lambda, s, p, n, sigma, delta);
  return check;
}

}  // namespace sf
