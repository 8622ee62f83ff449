#include "sf/harness.hpp"

#include "sf/parallel.hpp"
#include "sf/rng.hpp"
#include "sf/robust.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace sf {

namespace {

constexpr std::size_t kBlockTrials = 16;

constexpr std::pair<EstimatorKind, std::string_view> kEstimatorNames[] = {
    {EstimatorKind::naive, "naive"},
    {EstimatorKind::oracle, "oracle"},
    {EstimatorKind::gss, "gss"},
    {EstimatorKind::adgss, "adgss"},
    {EstimatorKind::ght, "ght"},
    {EstimatorKind::gst, "gst"},
    {EstimatorKind::ewht, "ewht"},
    {EstimatorKind::sample_mean, "sample_mean"},
    {EstimatorKind::coordinatewise_median, "coordinatewise_median"},
    {EstimatorKind::group_lasso, "group_lasso"},
    {EstimatorKind::ist, "ist"},
};

struct TrialData {
  Matrix y;
  Matrix theta;
  SparsityPattern support;
  Vector mu;  // empty in the column-sum model
};

TrialData generate(const ExperimentSpec& spec, std::uint64_t trial_index) {
  const auto p = static_cast<Eigen::Index>(spec.p);
  const auto n = static_cast<Eigen::Index>(spec.n);
  RandomStream rng(derive_seed(spec.master_seed, trial_index));
  TrialData data;
  data.theta = Matrix::Zero(p, n);

  if (spec.signal.kind == SignalKind::custom_matrix) {
    data.theta = *spec.signal.custom;
    std::vector<std::size_t> nonzero;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (data.theta.col(i).squaredNorm() > 0.0) nonzero.push_back(static_cast<std::size_t>(i));
    }
    data.support = SparsityPattern(spec.n, std::move(nonzero));
  } else {
    std::vector<std::size_t> positions;
    if (spec.signal.paper_layout) {
      positions.resize(spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) positions[i] = i;
    } else {
      positions = rng.permutation(spec.n);
    }
    const double magnitude = spec.signal.resolved_magnitude(spec.sigma, spec.p);
    std::vector<std::size_t> support(positions.begin(),
                                     positions.begin() + static_cast<std::ptrdiff_t>(spec.s));
    for (std::size_t column : support) {
      auto col = data.theta.col(static_cast<Eigen::Index>(column));
      switch (spec.signal.kind) {
        case SignalKind::zero:
          break;
        case SignalKind::constant_eps:
          col.setConstant(magnitude);
          break;
        case SignalKind::spherical:
          col = rng.on_sphere(p, magnitude);
          break;
        case SignalKind::worst_case_quartic:
          col.setConstant(spec.sigma * std::pow(static_cast<double>(spec.p), -0.25));
          break;
        case SignalKind::custom_matrix:
          break;
      }
    }
    data.support = SparsityPattern(spec.n, std::move(support));
  }

  Matrix noise(p, n);
  rng.fill_gaussian(noise);
  data.y = data.theta + spec.sigma * noise;
  if (spec.robust_model()) {
    data.mu = spec.mean_vector();
    data.y.colwise() += data.mu;
  }
  return data;
}

double resolved_delta(const ExperimentSpec& spec, const EstimatorConfig& cfg) {
  return cfg.delta.value_or(spec.delta);
}

std::optional<std::size_t> resolved_cap(const ExperimentSpec& spec, const EstimatorConfig& cfg) {
  if (cfg.full_search) return spec.n;
  return cfg.cardinality_cap;
}

ThresholdConfig threshold_config(const ExperimentSpec& spec, const EstimatorConfig& cfg) {
  ThresholdConfig t;
  t.sigma = spec.sigma;
  t.sparsity = spec.s;
  t.mode = cfg.sparsity_mode;
  return t;
}

EstimateResult plain(Vector v) {
  EstimateResult r;
  r.estimate = std::move(v);
  return r;
}

double squared_error(const ExperimentSpec& spec, const EstimatorConfig& cfg, const TrialData& data,
                     const Vector& estimate) {
  if (is_mean_estimator(cfg.kind)) return (estimate - data.mu).squaredNorm();
  (void)spec;
  return (estimate - linear_functional(data.theta)).squaredNorm();
}

struct Accumulator {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t violations = 0;
  std::size_t warned = 0;
  std::int64_t elapsed_ns = 0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Accumulator& other) {
    if (other.count == 0) return;
    const std::size_t total = count + other.count;
    const double d = other.mean - mean;
    const double wa = static_cast<double>(count);
    const double wb = static_cast<double>(other.count);
    mean += d * wb / static_cast<double>(total);
    m2 += other.m2 + d * d * wa * wb / static_cast<double>(total);
    count = total;
    violations += other.violations;
    warned += other.warned;
    elapsed_ns += other.elapsed_ns;
  }
};

}  // namespace

double SignalSpec::resolved_magnitude(double sigma, std::size_t p) const {
  switch (units) {
    case MagnitudeUnits::absolute: return magnitude;
    case MagnitudeUnits::sigma: return magnitude * sigma;
    case MagnitudeUnits::sigma_sqrt_p: return magnitude * sigma * std::sqrt(static_cast<double>(p));
  }
  return magnitude;
}

std::string_view estimator_name(EstimatorKind kind) {
  for (const auto& [k, name] : kEstimatorNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<EstimatorKind> parse_estimator_kind(std::string_view name) {
  for (const auto& [k, label] : kEstimatorNames) {
    if (label == name) return k;
  }
  return std::nullopt;
}

bool is_mean_estimator(EstimatorKind kind) {
  return kind == EstimatorKind::sample_mean || kind == EstimatorKind::coordinatewise_median ||
         kind == EstimatorKind::group_lasso || kind == EstimatorKind::ist;
}

std::string EstimatorConfig::label() const {
  return id.empty() ? std::string(estimator_name(kind)) : id;
}

Vector ExperimentSpec::mean_vector() const {
  if (!mu) return Vector::Zero(static_cast<Eigen::Index>(p));
  if (mu->size() == 1) return Vector::Constant(static_cast<Eigen::Index>(p), mu->front());
  return Eigen::Map<const Vector>(mu->data(), static_cast<Eigen::Index>(mu->size()));
}

void ExperimentSpec::validate() const {
  if (p < 1 || n < 1) throw InvalidArgument("experiment: p and n must be positive");
  if (s > n) throw InvalidArgument("experiment: s exceeds n");
  require_positive(sigma, "sigma");
  require_open_unit(delta, "delta");
  if (trials < 1) throw InvalidArgument("experiment: trials must be at least 1");
  if (mu && mu->size() != 1 && mu->size() != p) {
    throw InvalidArgument("experiment: mu must have length p (or a single broadcast value)");
  }
  if (mu && std::any_of(mu->begin(), mu->end(), [](double v) { return !std::isfinite(v); })) {
    throw InvalidArgument("experiment: mu entries must be finite");
  }
  if (signal.kind == SignalKind::custom_matrix) {
    if (!signal.custom) throw InvalidArgument("experiment: custom signal needs a matrix");
    if (static_cast<std::size_t>(signal.custom->rows()) != p ||
        static_cast<std::size_t>(signal.custom->cols()) != n) {
      throw InvalidArgument("experiment: custom signal must be p x n");
    }
    validate_matrix(*signal.custom, "custom signal");
  }
  if (signal.magnitude < 0.0 || !std::isfinite(signal.magnitude)) {
    throw InvalidArgument("experiment: signal magnitude must be nonnegative");
  }
  for (const auto& e : estimators) {
    if (is_mean_estimator(e.kind) != robust_model()) {
      throw InvalidArgument("experiment: estimator '" + e.label() +
                            (robust_model() ? "' estimates L(Theta) but the spec sets mu"
                                            : "' estimates mu but the spec has no mu"));
    }
    if (e.delta) require_open_unit(*e.delta, "estimator delta");
    if (e.bound.kind == BoundKind::fixed) require_positive(e.bound.value, "bound value");
  }
}

FunctionalInstance gen_functional_instance(const ExperimentSpec& spec, std::uint64_t trial_index) {
  spec.validate();
  ExperimentSpec plain = spec;
  plain.mu.reset();
  TrialData data = generate(plain, trial_index);
  return {std::move(data.y), std::move(data.theta), std::move(data.support)};
}

RobustInstance gen_robust_instance(const ExperimentSpec& spec, std::uint64_t trial_index) {
  spec.validate();
  if (!spec.robust_model()) throw InvalidArgument("gen_robust_instance: spec has no mu");
  TrialData data = generate(spec, trial_index);
  return {std::move(data.y), std::move(data.mu), std::move(data.theta), std::move(data.support)};
}

std::optional<double> deviation_bound_value(const ExperimentSpec& spec,
                                            const EstimatorConfig& cfg) {
  const double s2 = spec.sigma * spec.sigma;
  const double p = static_cast<double>(spec.p);
  const double n = static_cast<double>(spec.n);
  const double s = static_cast<double>(spec.s);
  const double delta = resolved_delta(spec, cfg);
  switch (cfg.bound.kind) {
    case BoundKind::none:
      return std::nullopt;
    case BoundKind::gss_deviation: {
      const double lambda = cfg.lambda_override.value_or(gss_lambda(spec.n, delta));
      return 60.0 * s2 * s * (p + lambda * s);
    }
    case BoundKind::adgss_deviation: {
      const double sparse = 60.0 * s * p + 90.0 * s * s * std::log(4.0 * n / delta);
      return 9.0 * s2 * std::min(sparse, adgss_naive_radius_sq(spec.p, spec.n, delta));
    }
    case BoundKind::group_lasso_mean: {
      const double lambda =
          cfg.lambda_override.value_or(group_lasso_lambda(spec.sigma, spec.p, spec.n, delta));
      return group_lasso_mean_bound(lambda, cfg.assumed_outliers.value_or(spec.s), spec.p, spec.n,
                                    spec.sigma, delta);
    }
    case BoundKind::fixed:
      return cfg.bound.value;
  }
  return std::nullopt;
}

EstimateResult apply_estimator(const ExperimentSpec& spec, const EstimatorConfig& cfg,
                               const Matrix& y, const SparsityPattern* support) {
  validate_matrix(y, "y");
  if (static_cast<std::size_t>(y.rows()) != spec.p || static_cast<std::size_t>(y.cols()) != spec.n) {
    throw InvalidArgument("apply_estimator: y must be p x n");
  }
  const double delta = resolved_delta(spec, cfg);
  switch (cfg.kind) {
    case EstimatorKind::naive:
      return naive_estimate(y);
    case EstimatorKind::oracle:
      if (support == nullptr) throw InvalidArgument("oracle estimator needs the true support");
      return oracle_estimate(y, *support);
    case EstimatorKind::gss: {
      GssConfig g;
      g.sigma = spec.sigma;
      g.delta = delta;
      g.cardinality_cap = resolved_cap(spec, cfg);
      g.lambda_override = cfg.lambda_override;
      g.allow_large_search = cfg.allow_large_search;
      return gss_estimate(y, g);
    }
    case EstimatorKind::adgss:
      return adgss_estimate(y, spec.sigma, delta, resolved_cap(spec, cfg), cfg.allow_large_search)
          .result;
    case EstimatorKind::ght: {
      const double lambda =
          cfg.lambda_override.value_or(ght_threshold(threshold_config(spec, cfg), spec.p, spec.n));
      return ght_estimate(y, lambda);
    }
    case EstimatorKind::gst: {
      const double gamma =
          cfg.gamma_override.value_or(gst_gamma(threshold_config(spec, cfg), spec.p, spec.n));
      return gst_estimate(y, spec.sigma, gamma);
    }
    case EstimatorKind::ewht: {
      const std::size_t s = threshold_config(spec, cfg).effective_sparsity();
      const double lambda = cfg.lambda_override.value_or(ewht_threshold(spec.sigma, spec.n, s));
      return ewht_estimate(y, lambda, cfg.side);
    }
    case EstimatorKind::sample_mean:
      return plain(sample_mean(y));
    case EstimatorKind::coordinatewise_median:
      return plain(coordinatewise_median(y));
    case EstimatorKind::group_lasso: {
      const std::size_t s = cfg.assumed_outliers.value_or(spec.s);
      const RobustInstanceView view{y, spec.sigma, s, delta};
      const double lambda =
          cfg.lambda_override.value_or(group_lasso_lambda(spec.sigma, spec.p, spec.n, delta));
      GroupLassoResult fit = group_lasso_fit(view, lambda);
      EstimateResult r = plain(std::move(fit.mu_hat));
      r.iterations = fit.iterations;
      for (Warning w : view.check()) r.add_warning(w);
      if (!fit.converged) r.add_warning(Warning::group_lasso_not_converged);
      std::vector<std::size_t> outliers;
      for (Eigen::Index i = 0; i < fit.theta_hat.cols(); ++i) {
        if (fit.theta_hat.col(i).squaredNorm() > 0.0) outliers.push_back(static_cast<std::size_t>(i));
      }
      r.support = SparsityPattern(spec.n, std::move(outliers));
      return r;
    }
    case EstimatorKind::ist: {
      const std::size_t s = cfg.assumed_outliers.value_or(spec.s);
      const RobustInstanceView view{y, spec.sigma, s, delta};
      return ist_estimate(view, cfg.iterations).mu_hat;
    }
  }
  throw InvalidArgument("unknown estimator");
}

TrialOutcome run_trial(const ExperimentSpec& spec, const EstimatorConfig& cfg,
                       std::uint64_t trial_index) {
  spec.validate();
  const TrialData data = generate(spec, trial_index);
  const EstimateResult r = apply_estimator(spec, cfg, data.y, &data.support);
  return {squared_error(spec, cfg, data, r.estimate), !r.warnings.empty()};
}

std::vector<RiskReport> mc_risk(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  const std::size_t k = spec.estimators.size();
  std::vector<std::optional<double>> bounds(k);
  for (std::size_t e = 0; e < k; ++e) bounds[e] = deviation_bound_value(spec, spec.estimators[e]);

  const std::size_t blocks = (spec.trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<std::vector<Accumulator>> partial(blocks, std::vector<Accumulator>(k));

  parallel_for(blocks, options.threads, [&](std::size_t b) {
    const std::size_t first = b * kBlockTrials;
    const std::size_t last = std::min(spec.trials, first + kBlockTrials);
    for (std::size_t t = first; t < last; ++t) {
      const TrialData data = generate(spec, t);
      for (std::size_t e = 0; e < k; ++e) {
        const auto& cfg = spec.estimators[e];
        const auto start = std::chrono::steady_clock::now();
        const EstimateResult result = apply_estimator(spec, cfg, data.y, &data.support);
        const double err = squared_error(spec, cfg, data, result.estimate);
        const bool warned = !result.warnings.empty();
        const auto stop = std::chrono::steady_clock::now();
        Accumulator& acc = partial[b][e];
        acc.add(err);
        if (bounds[e] && err > *bounds[e]) ++acc.violations;
        if (warned) ++acc.warned;
        acc.elapsed_ns +=
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
      }
    }
  });

  std::vector<RiskReport> reports;
  reports.reserve(k);
  for (std::size_t e = 0; e < k; ++e) {
    Accumulator total;
    for (std::size_t b = 0; b < blocks; ++b) total.merge(partial[b][e]);
    RiskReport r;
    r.estimator_id = spec.estimators[e].label();
    r.p = spec.p;
    r.n = spec.n;
    r.s = spec.s;
    r.sigma = spec.sigma;
    r.trials = total.count;
    r.mean_sq_error = total.mean;
    r.std_error = total.count > 1 ? std::sqrt(total.m2 / static_cast<double>(total.count - 1) /
                                              static_cast<double>(total.count))
                                  : 0.0;
    if (bounds[e]) {
      r.deviation_bound = bounds[e];
      r.violation_rate =
          static_cast<double>(total.violations) / static_cast<double>(total.count);
    }
    r.wall_time_ms = total.elapsed_ns / 1'000'000;
    r.warned_trials = total.warned;
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::p: return "p";
    case SweepAxis::n: return "n";
    case SweepAxis::s: return "s";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  if (name == "p") return SweepAxis::p;
  if (name == "n") return SweepAxis::n;
  if (name == "s") return SweepAxis::s;
  return std::nullopt;
}

namespace {

std::size_t axis_value(const RiskReport& r, SweepAxis axis) {
  switch (axis) {
    case SweepAxis::p: return r.p;
    case SweepAxis::n: return r.n;
    case SweepAxis::s: return r.s;
  }
  return 0;
}

}  // namespace

std::vector<RiskReport> rate_sweep(const ExperimentSpec& base, SweepAxis axis,
                                   const std::vector<std::size_t>& values,
                                   const RunOptions& options) {
  if (!std::is_sorted(values.begin(), values.end())) {
    throw InvalidArgument("rate_sweep: grid values must be ascending");
  }
  std::vector<RiskReport> rows;
  for (std::size_t v : values) {
    ExperimentSpec spec = base;
    switch (axis) {
      case SweepAxis::p: spec.p = v; break;
      case SweepAxis::n: spec.n = v; break;
      case SweepAxis::s: spec.s = v; break;
    }
    auto reports = mc_risk(spec, options);
    rows.insert(rows.end(), reports.begin(), reports.end());
  }
  return rows;
}

RatioDiagnostic ratio_diagnostic(const std::vector<RiskReport>& rows, SweepAxis axis,
                                 const std::string& numerator_id,
                                 const std::string& denominator_id) {
  std::map<std::size_t, std::pair<std::optional<double>, std::optional<double>>> grid;
  for (const auto& r : rows) {
    auto& slot = grid[axis_value(r, axis)];
    if (r.estimator_id == numerator_id) slot.first = r.mean_sq_error;
    if (r.estimator_id == denominator_id) slot.second = r.mean_sq_error;
  }
  RatioDiagnostic diag;
  for (const auto& [value, pair] : grid) {
    if (!pair.first || !pair.second) continue;
    diag.axis_values.push_back(static_cast<double>(value));
    diag.ratios.push_back(*pair.first / *pair.second);
  }
  diag.strictly_increasing = diag.ratios.size() >= 2;
  for (std::size_t i = 1; i < diag.ratios.size(); ++i) {
    if (!(diag.ratios[i] > diag.ratios[i - 1])) diag.strictly_increasing = false;
  }
  return diag;
}

}  // namespace sf
