#pragma once

// Estimators of the column sum L(Theta) = Theta * 1_n from Y = Theta + sigma * Xi,
// where at most s columns of Theta are nonzero.

#include "sf/core.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sf {

EstimateResult naive_estimate(const Matrix& y);

/// Sums the columns of Y in the true support S.
EstimateResult oracle_estimate(const Matrix& y, const SparsityPattern& support);

// ---------------------------------------------------------------------------
// Greedy subset selection

/// Default subset-size cap when none is configured: min(n, 12).
inline constexpr std::size_t kDefaultGssCap = 12;

/// Upper limit on the number of subsets one search round may visit unless
/// `allow_large_search` is set.
inline constexpr double kGssSubsetBudget = 2e9;

struct GssConfig {
  double sigma = 1.0;
  double delta = 0.1;
  /// Absent: min(n, kDefaultGssCap).
  std::optional<std::size_t> cardinality_cap;
  /// Absent: lambda = (3/2) log(2n / delta).
  std::optional<double> lambda_override;
  bool allow_large_search = false;

  double lambda(std::size_t n) const;
  std::size_t cap(std::size_t n) const;
};

/// (3/2) log(2n / delta).
double gss_lambda(std::size_t n, double delta);

/// Right-hand side of the selection test, 12 sigma^2 (k p + lambda k^2).
double gss_selection_threshold(double sigma, double lambda, std::size_t p, std::size_t k);

/// Among nonempty J subset of `candidates` (ascending) with |J| <= cap and
/// ||L(Y_J)||^2 >= 12 sigma^2 (|J| p + lambda |J|^2), returns one of minimum
/// cardinality, first in lexicographic order. nullopt if none passes.
std::optional<std::vector<std::size_t>> gss_find_passing_subset(
    const Matrix& y, std::span<const std::size_t> candidates, double sigma, double lambda,
    std::size_t cap);

/// Repeats gss_find_passing_subset on the still unselected columns until it
/// fails or nothing is left; returns L(Y_S) for the union S of the selections.
/// `iterations` counts search rounds including the terminating one.
EstimateResult gss_estimate(const Matrix& y, const GssConfig& cfg);

struct AdaptiveGssResult {
  EstimateResult result;
  bool gss_branch = false;
  std::size_t s_hat = 0;
  double dist = 0.0;
  double lambda = 0.0;
};

/// Chooses between the GSS estimate (run at lambda = (3/2) log(4n/delta)) and
/// the naive estimate by intersecting their confidence balls.
AdaptiveGssResult adgss_estimate(const Matrix& y, double sigma, double delta,
                                 std::optional<std::size_t> cardinality_cap = std::nullopt,
                                 bool allow_large_search = false);

/// Squared radius (r1 / sigma)^2 = 2np + 3n log(2/delta) around L(Y).
double adgss_naive_radius_sq(std::size_t p, std::size_t n, double delta);

// ---------------------------------------------------------------------------
// Thresholding

enum class SparsityMode { known, free };

struct ThresholdConfig {
  double sigma = 1.0;
  std::optional<std::size_t> sparsity;
  SparsityMode mode = SparsityMode::known;

  /// s in s-known mode, 1 in s-free mode.
  std::size_t effective_sparsity() const;
};

/// max{ log(1 + n/s^2), sqrt(p) * sqrt(log(1 + n^2 p / s^4)) }.
double group_threshold_rate(std::size_t p, std::size_t n, std::size_t s);

/// lambda with lambda^2 = sigma^2 (p + 4 * group_threshold_rate).
double ght_threshold(const ThresholdConfig& cfg, std::size_t p, std::size_t n);

/// Keeps the columns with ||Y_i|| >= lambda and sums them.
EstimateResult ght_estimate(const Matrix& y, double lambda);

/// gamma with gamma^2 = 4 * group_threshold_rate. Dimensionless.
double gst_gamma(const ThresholdConfig& cfg, std::size_t p, std::size_t n);

/// Group soft thresholding with the data-driven weights
/// lambda_i = 2 sigma gamma ||Y_i|| / (||Y_i||^2 - sigma^2 p)_+^{1/2}:
/// theta_i = (1 - sigma gamma / (||Y_i||^2 - sigma^2 p)^{1/2})_+ Y_i, and
/// theta_i = 0 when ||Y_i||^2 <= sigma^2 p.
EstimateResult gst_estimate(const Matrix& y, double sigma, double gamma);

/// Per-column shrink factor used by gst_estimate.
double gst_shrink_factor(double column_norm_sq, double sigma, double gamma, std::size_t p);

/// lambda with lambda^2 = 2 sigma^2 log(1 + n/s^2).
double ewht_threshold(double sigma, std::size_t n, std::size_t s);

enum class ThresholdSide {
  /// Keeps Y_ij > lambda.
  one_sided,
  /// Keeps |Y_ij| > lambda.
  two_sided,
};

/// Entry-wise hard thresholding; the support is left undefined.
EstimateResult ewht_estimate(const Matrix& y, double lambda,
                             ThresholdSide side = ThresholdSide::one_sided);

}  // namespace sf
