#include "sf/functional_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sf {

namespace {

/// Depth-first enumeration of k-subsets of `candidates` in lexicographic
/// order, carrying running column sums so each node costs O(p).
class SubsetSearch {
 public:
  SubsetSearch(const Matrix& y, std::span<const std::size_t> candidates)
      : y_(y), candidates_(candidates) {}

  std::optional<std::vector<std::size_t>> first_passing(std::size_t k, double threshold) {
    chosen_.assign(k, 0);
    partial_.assign(k + 1, Vector::Zero(y_.rows()));
    threshold_ = threshold;
    if (descend(0, 0, k)) return chosen_;
    return std::nullopt;
  }

 private:
  bool descend(std::size_t start, std::size_t depth, std::size_t k) {
    const std::size_t m = candidates_.size();
    for (std::size_t idx = start; idx + (k - depth) <= m; ++idx) {
      const std::size_t column = candidates_[idx];
      chosen_[depth] = column;
      partial_[depth + 1] = partial_[depth] + y_.col(static_cast<Eigen::Index>(column));
      if (depth + 1 == k) {
        if (partial_[k].squaredNorm() >= threshold_) return true;
      } else if (descend(idx + 1, depth + 1, k)) {
        return true;
      }
    }
    return false;
  }

  const Matrix& y_;
  std::span<const std::size_t> candidates_;
  std::vector<std::size_t> chosen_;
  std::vector<Vector> partial_;
  double threshold_ = 0.0;
};

double subsets_up_to(std::size_t m, std::size_t cap) {
  double total = 0.0;
  double binom = 1.0;
  for (std::size_t k = 1; k <= std::min(m, cap); ++k) {
    binom = binom * static_cast<double>(m - k + 1) / static_cast<double>(k);
    total += binom;
  }
  return total;
}

}  // namespace

double gss_lambda(std::size_t n, double delta) {
  require_open_unit(delta, "delta");
  return 1.5 * std::log(2.0 * static_cast<double>(n) / delta);
}

double GssConfig::lambda(std::size_t n) const {
  if (lambda_override) {
    require_positive(*lambda_override, "lambda_override");
    return *lambda_override;
  }
  return gss_lambda(n, delta);
}

std::size_t GssConfig::cap(std::size_t n) const {
  return cardinality_cap ? *cardinality_cap : std::min(n, kDefaultGssCap);
}

double gss_selection_threshold(double sigma, double lambda, std::size_t p, std::size_t k) {
  const double kd = static_cast<double>(k);
  return 12.0 * sigma * sigma * (kd * static_cast<double>(p) + lambda * kd * kd);
}

std::optional<std::vector<std::size_t>> gss_find_passing_subset(
    const Matrix& y, std::span<const std::size_t> candidates, double sigma, double lambda,
    std::size_t cap) {
  const auto p = static_cast<std::size_t>(y.rows());
  SubsetSearch search(y, candidates);
  for (std::size_t k = 1; k <= std::min(cap, candidates.size()); ++k) {
    if (auto found = search.first_passing(k, gss_selection_threshold(sigma, lambda, p, k))) {
      return found;
    }
  }
  return std::nullopt;
}

EstimateResult gss_estimate(const Matrix& y, const GssConfig& cfg) {
  validate_matrix(y, "Y");
  require_positive(cfg.sigma, "sigma");
  const auto n = static_cast<std::size_t>(y.cols());
  const double lambda = cfg.lambda(n);
  const std::size_t cap = cfg.cap(n);
  if (cap < 1) throw InvalidArgument("gss: cardinality_cap must be at least 1");
  if (cap > n) throw InvalidArgument("gss: cardinality_cap exceeds the number of columns");
  if (!cfg.allow_large_search) {
    if (cap > 20 && n > 30) {
      throw InvalidArgument("gss: cardinality_cap > 20 with n > 30 requires allow_large_search");
    }
    if (subsets_up_to(n, cap) > kGssSubsetBudget) {
      throw InvalidArgument("gss: subset search exceeds the default budget (" +
                            std::to_string(subsets_up_to(n, cap)) +
                            " subsets); lower the cap or set allow_large_search");
    }
  }

  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::vector<std::size_t> selected;

  EstimateResult r;
  while (!remaining.empty()) {
    ++r.iterations;
    auto found = gss_find_passing_subset(y, remaining, cfg.sigma, lambda, cap);
    if (!found) {
      // Only the terminating round can be truncated: a successful round stops
      // at the first cardinality that passes, which is then the true minimum.
      if (remaining.size() > cap) r.add_warning(Warning::gss_cap_binding);
      break;
    }
    selected.insert(selected.end(), found->begin(), found->end());
    std::vector<std::size_t> rest;
    rest.reserve(remaining.size() - found->size());
    std::set_difference(remaining.begin(), remaining.end(), found->begin(), found->end(),
                        std::back_inserter(rest));
    remaining = std::move(rest);
  }

  r.support = SparsityPattern(n, std::move(selected));
  r.estimate = sum_columns(y, *r.support);
  return r;
}

double adgss_naive_radius_sq(std::size_t p, std::size_t n, double delta) {
  const double nd = static_cast<double>(n);
  return 2.0 * nd * static_cast<double>(p) + 3.0 * nd * std::log(2.0 / delta);
}

AdaptiveGssResult adgss_estimate(const Matrix& y, double sigma, double delta,
                                 std::optional<std::size_t> cardinality_cap,
                                 bool allow_large_search) {
  validate_matrix(y, "Y");
  require_positive(sigma, "sigma");
  require_open_unit(delta, "delta");
  const auto p = static_cast<std::size_t>(y.rows());
  const auto n = static_cast<std::size_t>(y.cols());
  const double pd = static_cast<double>(p);

  AdaptiveGssResult out;
  out.lambda = 1.5 * std::log(4.0 * static_cast<double>(n) / delta);

  GssConfig cfg;
  cfg.sigma = sigma;
  cfg.delta = delta;
  cfg.cardinality_cap = cardinality_cap;
  cfg.lambda_override = out.lambda;
  cfg.allow_large_search = allow_large_search;
  EstimateResult gss = gss_estimate(y, cfg);
  const Vector naive = linear_functional(y);

  out.dist = (gss.estimate - naive).norm() / sigma;
  const double r1 = std::sqrt(adgss_naive_radius_sq(p, n, delta));
  const auto r2 = [&](std::size_t k) {
    const double kd = static_cast<double>(k);
    return 60.0 * kd * (pd + out.lambda * kd);
  };

  out.s_hat = n;
  for (std::size_t k = 1; k <= n; ++k) {
    if (out.dist <= std::sqrt(r2(k)) + r1) {
      out.s_hat = k;
      break;
    }
  }

  out.gss_branch = r2(out.s_hat) <= adgss_naive_radius_sq(p, n, delta);
  if (out.gss_branch) {
    out.result = std::move(gss);
  } else {
    out.result.estimate = naive;
    out.result.support = SparsityPattern::full(n);
    out.result.iterations = gss.iterations;
    out.result.warnings = gss.warnings;
  }
  return out;
}

}  // namespace sf
