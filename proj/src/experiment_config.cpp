#include "sf/experiment_config.hpp"

#include "sf/rng.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace sf {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string_view> allowed(known);
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(path + "." + key, "unknown field");
  }
}

std::size_t get_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

double get_real(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

template <class T, std::size_t N>
T lookup(const std::pair<T, std::string_view> (&table)[N], const std::string& name,
         const std::string& path) {
  for (const auto& [value, label] : table) {
    if (label == name) return value;
  }
  std::string options;
  for (const auto& [value, label] : table) options += (options.empty() ? "" : ", ") + std::string(label);
  fail(path, "unknown value '" + name + "' (expected one of: " + options + ")");
}

template <class T, std::size_t N>
std::string_view name_of(const std::pair<T, std::string_view> (&table)[N], T value) {
  for (const auto& [v, label] : table) {
    if (v == value) return label;
  }
  return "?";
}

constexpr std::pair<SignalKind, std::string_view> kSignalKinds[] = {
    {SignalKind::zero, "zero"},
    {SignalKind::constant_eps, "constant-eps"},
    {SignalKind::spherical, "spherical"},
    {SignalKind::worst_case_quartic, "worst-case-quartic"},
    {SignalKind::custom_matrix, "custom-matrix"},
};

constexpr std::pair<MagnitudeUnits, std::string_view> kUnits[] = {
    {MagnitudeUnits::absolute, "absolute"},
    {MagnitudeUnits::sigma, "sigma"},
    {MagnitudeUnits::sigma_sqrt_p, "sigma_sqrt_p"},
};

constexpr std::pair<SparsityMode, std::string_view> kModes[] = {
    {SparsityMode::known, "s-known"},
    {SparsityMode::free, "s-free"},
};

constexpr std::pair<ThresholdSide, std::string_view> kSides[] = {
    {ThresholdSide::one_sided, "one-sided"},
    {ThresholdSide::two_sided, "two-sided"},
};

constexpr std::pair<BoundKind, std::string_view> kBounds[] = {
    {BoundKind::none, "none"},
    {BoundKind::gss_deviation, "gss_deviation"},
    {BoundKind::adgss_deviation, "adgss_deviation"},
    {BoundKind::group_lasso_mean, "group_lasso_mean"},
};

SignalSpec signal_from_json(const json& doc, const std::string& path) {
  reject_unknown_keys(doc, path, {"kind", "magnitude", "units", "paper_layout", "matrix"});
  SignalSpec s;
  if (doc.contains("kind")) s.kind = lookup(kSignalKinds, get_string(doc["kind"], path + ".kind"), path + ".kind");
  if (doc.contains("magnitude")) s.magnitude = get_real(doc["magnitude"], path + ".magnitude");
  if (doc.contains("units")) s.units = lookup(kUnits, get_string(doc["units"], path + ".units"), path + ".units");
  if (doc.contains("paper_layout")) s.paper_layout = get_bool(doc["paper_layout"], path + ".paper_layout");
  if (doc.contains("matrix")) {
    const json& cols = doc["matrix"];
    const std::string mpath = path + ".matrix";
    if (!cols.is_array() || cols.empty()) fail(mpath, "expected a nonempty array of columns");
    const std::size_t rows = cols[0].is_array() ? cols[0].size() : 0;
    if (rows == 0) fail(mpath + "[0]", "expected a nonempty array of numbers");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string cpath = mpath + "[" + std::to_string(i) + "]";
      if (!cols[i].is_array() || cols[i].size() != rows) fail(cpath, "column length mismatch");
      for (std::size_t j = 0; j < rows; ++j) {
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
            get_real(cols[i][j], cpath + "[" + std::to_string(j) + "]");
      }
    }
    s.custom = std::move(m);
  }
  return s;
}

json signal_to_json(const SignalSpec& s) {
  json out = {{"kind", name_of(kSignalKinds, s.kind)},
              {"magnitude", s.magnitude},
              {"units", name_of(kUnits, s.units)},
              {"paper_layout", s.paper_layout}};
  if (s.custom) {
    json cols = json::array();
    for (Eigen::Index i = 0; i < s.custom->cols(); ++i) {
      json col = json::array();
      for (Eigen::Index j = 0; j < s.custom->rows(); ++j) col.push_back((*s.custom)(j, i));
      cols.push_back(std::move(col));
    }
    out["matrix"] = std::move(cols);
  }
  return out;
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

EstimatorConfig estimator_from_json(const json& doc, const std::string& path) {
  if (doc.is_string()) {
    json wrapped = {{"kind", doc}};
    return estimator_from_json(wrapped, path);
  }
  reject_unknown_keys(doc, path,
                      {"kind", "id", "delta", "sparsity_mode", "lambda", "gamma", "cap",
                       "allow_large_search", "side", "iterations", "assumed_outliers", "bound"});
  if (!doc.contains("kind")) fail(path + ".kind", "missing required field");
  EstimatorConfig e;
  const std::string kind = get_string(doc["kind"], path + ".kind");
  const auto parsed = parse_estimator_kind(kind);
  if (!parsed) fail(path + ".kind", "unknown estimator '" + kind + "'");
  e.kind = *parsed;
  if (doc.contains("id")) e.id = get_string(doc["id"], path + ".id");
  if (doc.contains("delta")) e.delta = get_real(doc["delta"], path + ".delta");
  if (doc.contains("sparsity_mode")) {
    e.sparsity_mode = lookup(kModes, get_string(doc["sparsity_mode"], path + ".sparsity_mode"),
                             path + ".sparsity_mode");
  }
  if (doc.contains("lambda") && !doc["lambda"].is_null()) e.lambda_override = get_real(doc["lambda"], path + ".lambda");
  if (doc.contains("gamma") && !doc["gamma"].is_null()) e.gamma_override = get_real(doc["gamma"], path + ".gamma");
  if (doc.contains("cap")) {
    const json& cap = doc["cap"];
    if (cap.is_string()) {
      if (cap.get<std::string>() != "full") fail(path + ".cap", "expected an integer or \"full\"");
      e.full_search = true;
    } else {
      e.cardinality_cap = get_count(cap, path + ".cap");
    }
  }
  if (doc.contains("allow_large_search")) {
    e.allow_large_search = get_bool(doc["allow_large_search"], path + ".allow_large_search");
  }
  if (doc.contains("side")) e.side = lookup(kSides, get_string(doc["side"], path + ".side"), path + ".side");
  if (doc.contains("iterations")) e.iterations = get_count(doc["iterations"], path + ".iterations");
  if (doc.contains("assumed_outliers")) {
    e.assumed_outliers = get_count(doc["assumed_outliers"], path + ".assumed_outliers");
  }
  if (doc.contains("bound")) {
    const json& b = doc["bound"];
    if (b.is_number()) {
      e.bound = {BoundKind::fixed, b.get<double>()};
    } else {
      e.bound.kind = lookup(kBounds, get_string(b, path + ".bound"), path + ".bound");
    }
  }
  return e;
}

json estimator_to_json(const EstimatorConfig& e) {
  json out = {{"kind", estimator_name(e.kind)},
              {"id", e.label()},
              {"sparsity_mode", name_of(kModes, e.sparsity_mode)},
              {"allow_large_search", e.allow_large_search},
              {"side", name_of(kSides, e.side)},
              {"iterations", e.iterations}};
  if (e.delta) out["delta"] = *e.delta;
  if (e.lambda_override) out["lambda"] = *e.lambda_override;
  if (e.gamma_override) out["gamma"] = *e.gamma_override;
  if (e.full_search) {
    out["cap"] = "full";
  } else if (e.cardinality_cap) {
    out["cap"] = *e.cardinality_cap;
  }
  if (e.assumed_outliers) out["assumed_outliers"] = *e.assumed_outliers;
  if (e.bound.kind == BoundKind::fixed) {
    out["bound"] = e.bound.value;
  } else {
    out["bound"] = name_of(kBounds, e.bound.kind);
  }
  return out;
}

ExperimentSpec experiment_from_json(const json& doc) {
  reject_unknown_keys(doc, "config",
                      {"p", "n", "s", "sigma", "delta", "signal", "mu", "estimators", "trials",
                       "master_seed", "sweep", "generator"});
  ExperimentSpec spec;
  for (const char* key : {"p", "n"}) {
    if (!doc.contains(key)) fail(std::string("config.") + key, "missing required field");
  }
  spec.p = get_count(doc["p"], "config.p");
  spec.n = get_count(doc["n"], "config.n");
  if (doc.contains("s")) spec.s = get_count(doc["s"], "config.s");
  if (doc.contains("sigma")) spec.sigma = get_real(doc["sigma"], "config.sigma");
  if (doc.contains("delta")) spec.delta = get_real(doc["delta"], "config.delta");
  if (doc.contains("signal")) spec.signal = signal_from_json(doc["signal"], "config.signal");
  if (doc.contains("mu")) {
    const json& mu = doc["mu"];
    if (mu.is_number()) {
      spec.mu = std::vector<double>{mu.get<double>()};
    } else if (mu.is_array() && !mu.empty()) {
      std::vector<double> values;
      for (std::size_t j = 0; j < mu.size(); ++j) {
        values.push_back(get_real(mu[j], "config.mu[" + std::to_string(j) + "]"));
      }
      spec.mu = std::move(values);
    } else {
      fail("config.mu", "expected a number or a nonempty array");
    }
  }
  if (doc.contains("estimators")) {
    const json& list = doc["estimators"];
    if (!list.is_array()) fail("config.estimators", "expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      spec.estimators.push_back(
          estimator_from_json(list[k], "config.estimators[" + std::to_string(k) + "]"));
    }
  }
  if (doc.contains("generator") && get_string(doc["generator"], "config.generator") != kGeneratorId) {
    fail("config.generator", "results were produced by a different generator than " + std::string(kGeneratorId));
  }
  if (doc.contains("trials")) spec.trials = get_count(doc["trials"], "config.trials");
  if (doc.contains("master_seed")) {
    const json& seed = doc["master_seed"];
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      fail("config.master_seed", "expected an unsigned 64-bit integer");
    }
    spec.master_seed = seed.get<std::uint64_t>();
  }
  try {
    spec.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return spec;
}

json experiment_to_json(const ExperimentSpec& spec) {
  json out = {{"p", spec.p},
              {"n", spec.n},
              {"s", spec.s},
              {"sigma", spec.sigma},
              {"delta", spec.delta},
              {"signal", signal_to_json(spec.signal)},
              {"trials", spec.trials},
              {"master_seed", spec.master_seed},
              {"generator", kGeneratorId}};
  if (spec.mu) out["mu"] = *spec.mu;
  json list = json::array();
  for (const auto& e : spec.estimators) {
    json item = estimator_to_json(e);
    item["delta"] = e.delta.value_or(spec.delta);
    if (e.kind == EstimatorKind::gss || e.kind == EstimatorKind::adgss) {
      if (!item.contains("cap")) item["cap"] = GssConfig{}.cap(spec.n);
    }
    if (is_mean_estimator(e.kind)) item["assumed_outliers"] = e.assumed_outliers.value_or(spec.s);
    for (const char* key : {"lambda", "gamma"}) {
      if (!item.contains(key)) item[key] = nullptr;
    }
    list.push_back(std::move(item));
  }
  out["estimators"] = std::move(list);
  return out;
}

SweepSpec sweep_from_json(const json& doc) {
  if (!doc.contains("sweep")) fail("config.sweep", "missing required field");
  const json& sw = doc["sweep"];
  reject_unknown_keys(sw, "config.sweep", {"axis", "values"});
  SweepSpec out;
  if (!sw.contains("axis")) fail("config.sweep.axis", "missing required field");
  const std::string axis = get_string(sw["axis"], "config.sweep.axis");
  const auto parsed = parse_axis(axis);
  if (!parsed) fail("config.sweep.axis", "expected one of p, n, s");
  out.axis = *parsed;
  if (!sw.contains("values") || !sw["values"].is_array()) {
    fail("config.sweep.values", "expected an array of integers");
  }
  for (std::size_t k = 0; k < sw["values"].size(); ++k) {
    out.values.push_back(get_count(sw["values"][k], "config.sweep.values[" + std::to_string(k) + "]"));
  }
  if (!std::is_sorted(out.values.begin(), out.values.end())) {
    fail("config.sweep.values", "values must be ascending");
  }
  return out;
}

json sweep_to_json(const SweepSpec& sweep) {
  return {{"axis", axis_name(sweep.axis)}, {"values", sweep.values}};
}

}  // namespace sf
