#include "sf/functional_estimators.hpp"

#include <algorithm>
#include <cmath>

namespace sf {

EstimateResult naive_estimate(const Matrix& y) {
  validate_matrix(y, "Y");
  EstimateResult r;
  r.estimate = linear_functional(y);
  r.support = SparsityPattern::full(static_cast<std::size_t>(y.cols()));
  return r;
}

EstimateResult oracle_estimate(const Matrix& y, const SparsityPattern& support) {
  validate_matrix(y, "Y");
  EstimateResult r;
  r.estimate = sum_columns(y, support);
  r.support = support;
  return r;
}

std::size_t ThresholdConfig::effective_sparsity() const {
  if (mode == SparsityMode::free) return 1;
  if (!sparsity || *sparsity == 0) {
    throw InvalidArgument("threshold config: s-known mode needs a positive sparsity");
  }
  return *sparsity;
}

double group_threshold_rate(std::size_t p, std::size_t n, std::size_t s) {
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  const double s2 = static_cast<double>(s) * static_cast<double>(s);
  const double sparse_term = std::log1p(nd / s2);
  const double dense_term = std::sqrt(pd) * std::sqrt(std::log1p(nd * nd * pd / (s2 * s2)));
  return std::max(sparse_term, dense_term);
}

double ght_threshold(const ThresholdConfig& cfg, std::size_t p, std::size_t n) {
  require_positive(cfg.sigma, "sigma");
  const double rate = group_threshold_rate(p, n, cfg.effective_sparsity());
  return cfg.sigma * std::sqrt(static_cast<double>(p) + 4.0 * rate);
}

EstimateResult ght_estimate(const Matrix& y, double lambda) {
  validate_matrix(y, "Y");
  require_positive(lambda, "lambda");
  EstimateResult r;
  r.estimate = Vector::Zero(y.rows());
  std::vector<std::size_t> kept;
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    if (y.col(i).norm() >= lambda) {
      r.estimate += y.col(i);
      kept.push_back(static_cast<std::size_t>(i));
    }
  }
  r.support = SparsityPattern(static_cast<std::size_t>(y.cols()), std::move(kept));
  return r;
}

double gst_gamma(const ThresholdConfig& cfg, std::size_t p, std::size_t n) {
  return 2.0 * std::sqrt(group_threshold_rate(p, n, cfg.effective_sparsity()));
}

double gst_shrink_factor(double column_norm_sq, double sigma, double gamma, std::size_t p) {
  const double excess = column_norm_sq - sigma * sigma * static_cast<double>(p);
  if (excess <= 0.0) return 0.0;  // infinite weight: nothing to fit
  return std::max(0.0, 1.0 - sigma * gamma / std::sqrt(excess));
}

EstimateResult gst_estimate(const Matrix& y, double sigma, double gamma) {
  validate_matrix(y, "Y");
  require_positive(sigma, "sigma");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be nonnegative");
  const auto p = static_cast<std::size_t>(y.rows());
  EstimateResult r;
  r.estimate = Vector::Zero(y.rows());
  std::vector<std::size_t> kept;
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    const double factor = gst_shrink_factor(y.col(i).squaredNorm(), sigma, gamma, p);
    if (factor > 0.0) {
      r.estimate += factor * y.col(i);
      kept.push_back(static_cast<std::size_t>(i));
    }
  }
  r.support = SparsityPattern(static_cast<std::size_t>(y.cols()), std::move(kept));
  return r;
}

double ewht_threshold(double sigma, std::size_t n, std::size_t s) {
  require_positive(sigma, "sigma");
  if (s == 0) throw InvalidArgument("ewht_threshold: s must be at least 1");
  const double s2 = static_cast<double>(s) * static_cast<double>(s);
  return sigma * std::sqrt(2.0 * std::log1p(static_cast<double>(n) / s2));
}

EstimateResult ewht_estimate(const Matrix& y, double lambda, ThresholdSide side) {
  validate_matrix(y, "Y");
  require_positive(lambda, "lambda");
  EstimateResult r;
  r.estimate = Vector::Zero(y.rows());
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      const double v = y(j, i);
      const bool keep = side == ThresholdSide::one_sided ? v > lambda : std::abs(v) > lambda;
      if (keep) r.estimate[j] += v;
    }
  }
  return r;
}

}  // namespace sf
