#pragma once

// Seeded instance generation and Monte Carlo risk estimation for both the
// column-sum model Y = Theta + sigma Xi and the contaminated-mean model
// Y = mu 1^T + Theta + sigma Xi.

#include "sf/core.hpp"
#include "sf/functional_estimators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sf {

enum class SignalKind { zero, constant_eps, spherical, worst_case_quartic, custom_matrix };

/// Unit of SignalSpec::magnitude.
enum class MagnitudeUnits { absolute, sigma, sigma_sqrt_p };

struct SignalSpec {
  SignalKind kind = SignalKind::zero;
  double magnitude = 0.0;
  MagnitudeUnits units = MagnitudeUnits::absolute;
  /// Keep the nonzero columns in positions 1..s instead of a seeded random
  /// placement.
  bool paper_layout = false;
  /// Theta for custom_matrix (p x n); its nonzero columns define the support.
  std::optional<Matrix> custom;

  double resolved_magnitude(double sigma, std::size_t p) const;
};

enum class EstimatorKind {
  naive,
  oracle,
  gss,
  adgss,
  ght,
  gst,
  ewht,
  sample_mean,
  coordinatewise_median,
  group_lasso,
  ist,
};

std::string_view estimator_name(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator_kind(std::string_view name);
/// True for estimators of mu in the contaminated-mean model.
bool is_mean_estimator(EstimatorKind kind);

enum class BoundKind {
  none,
  /// 60 sigma^2 s (p + lambda s) with the GSS lambda in use.
  gss_deviation,
  /// 9 sigma^2 min(60 s p + 90 s^2 log(4n/delta), 2np + 3n log(2/delta)).
  adgss_deviation,
  /// 288 s^2 lambda^2 / n^2 + 4 sigma^2 p / n + 8 sigma^2 log(2/delta) / n.
  group_lasso_mean,
  /// DeviationBound::value as given.
  fixed,
};

struct DeviationBound {
  BoundKind kind = BoundKind::none;
  double value = 0.0;
};

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::naive;
  /// Label in reports; estimator_name(kind) when empty.
  std::string id;
  /// Falls back to ExperimentSpec::delta.
  std::optional<double> delta;
  SparsityMode sparsity_mode = SparsityMode::known;
  std::optional<double> lambda_override;
  std::optional<double> gamma_override;
  /// GSS / adaptive GSS subset-size cap; `full_search` sets it to n.
  std::optional<std::size_t> cardinality_cap;
  bool full_search = false;
  bool allow_large_search = false;
  ThresholdSide side = ThresholdSide::one_sided;
  /// Iterative soft thresholding steps.
  std::size_t iterations = 4;
  /// Outlier count handed to the mean estimators; falls back to ExperimentSpec::s.
  std::optional<std::size_t> assumed_outliers;
  DeviationBound bound;

  std::string label() const;
};

struct ExperimentSpec {
  std::size_t p = 1;
  std::size_t n = 1;
  std::size_t s = 0;
  double sigma = 1.0;
  double delta = 0.1;
  SignalSpec signal;
  /// Present for the contaminated-mean model. A single value is broadcast to length p.
  std::optional<std::vector<double>> mu;
  std::vector<EstimatorConfig> estimators;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;

  bool robust_model() const { return mu.has_value(); }
  Vector mean_vector() const;
  /// Throws InvalidArgument on inconsistent fields.
  void validate() const;
};

struct FunctionalInstance {
  Matrix y;
  Matrix theta;
  SparsityPattern support;
};

struct RobustInstance {
  Matrix y;
  Vector mu;
  Matrix theta;
  SparsityPattern support;
};

/// Theta per the signal spec, support placement and noise all drawn from the
/// stream derive_seed(master_seed, trial_index).
FunctionalInstance gen_functional_instance(const ExperimentSpec& spec, std::uint64_t trial_index);

/// Same draws as gen_functional_instance, shifted by mu in every column.
RobustInstance gen_robust_instance(const ExperimentSpec& spec, std::uint64_t trial_index);

struct RiskReport {
  std::string estimator_id;
  std::size_t p = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  double sigma = 0.0;
  double mean_sq_error = 0.0;
  double std_error = 0.0;
  std::optional<double> deviation_bound;
  std::optional<double> violation_rate;
  std::size_t trials = 0;
  std::int64_t wall_time_ms = 0;
  /// Trials in which the estimator raised at least one warning.
  std::size_t warned_trials = 0;
};

struct RunOptions {
  /// 0: all hardware threads.
  unsigned threads = 1;
};

/// Squared-error bound configured for `cfg` on `spec`, if any.
std::optional<double> deviation_bound_value(const ExperimentSpec& spec, const EstimatorConfig& cfg);

/// Applies one configured estimator to a given p x n matrix. `support` is the
/// true support, needed only by the oracle estimator.
EstimateResult apply_estimator(const ExperimentSpec& spec, const EstimatorConfig& cfg,
                               const Matrix& y, const SparsityPattern* support = nullptr);

struct TrialOutcome {
  double squared_error = 0.0;
  bool warned = false;
};

/// Applies one configured estimator to trial `trial_index` of `spec`.
TrialOutcome run_trial(const ExperimentSpec& spec, const EstimatorConfig& cfg,
                       std::uint64_t trial_index);

/// Empirical E||L_hat - L(Theta)||^2 (or E||mu_hat - mu||^2 for mean
/// estimators) per configured estimator. Results do not depend on the thread
/// count: trials are grouped in fixed blocks whose accumulators are merged in
/// block order.
std::vector<RiskReport> mc_risk(const ExperimentSpec& spec, const RunOptions& options = {});

enum class SweepAxis { p, n, s };

std::string_view axis_name(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);

/// One mc_risk run per grid value, rows grouped by grid value. `values` must be
/// ascending.
std::vector<RiskReport> rate_sweep(const ExperimentSpec& base, SweepAxis axis,
                                   const std::vector<std::size_t>& values,
                                   const RunOptions& options = {});

struct RatioDiagnostic {
  std::vector<double> axis_values;
  /// MSE(numerator) / MSE(denominator) per grid value.
  std::vector<double> ratios;
  bool strictly_increasing = false;
};

RatioDiagnostic ratio_diagnostic(const std::vector<RiskReport>& rows, SweepAxis axis,
                                 const std::string& numerator_id,
                                 const std::string& denominator_id);

}  // namespace sf
