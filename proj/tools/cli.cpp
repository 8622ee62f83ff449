#include "cli.hpp"

#include "sf/experiment_config.hpp"
#include "sf/lemma_suite.hpp"
#include "sf/report.hpp"
#include "sf/rng.hpp"
#include "sf/svg_plot.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace sf::cli {

namespace {

using nlohmann::json;

class MissingFlag : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

std::string_view verb_name(Verb v) {
  switch (v) {
    case Verb::gen: return "gen";
    case Verb::estimate: return "estimate";
    case Verb::bench: return "bench";
    case Verb::sweep: return "sweep";
    case Verb::verify: return "verify";
    case Verb::plot: return "plot";
  }
  return "?";
}

void require(bool present, Verb v, const char* flag) {
  if (!present) throw MissingFlag(std::string(verb_name(v)) + ": " + flag + " is required");
}

void validate_flags(const CliCommand& c) {
  switch (c.verb) {
    case Verb::gen:
    case Verb::bench:
    case Verb::sweep:
      require(!c.config_path.empty(), c.verb, "--config");
      require(!c.output_path.empty(), c.verb, "--out");
      break;
    case Verb::estimate:
      require(!c.input_path.empty(), c.verb, "--input");
      require(!c.config_path.empty() || !c.estimator.empty(), c.verb, "--config or --estimator");
      break;
    case Verb::plot:
      require(!c.input_path.empty(), c.verb, "--input");
      require(!c.output_path.empty(), c.verb, "--out");
      if (!c.axis.empty() && !parse_axis(c.axis)) throw InvalidArgument("plot: --axis must be p, n or s");
      break;
    case Verb::verify:
      break;
  }
  if (c.threads && *c.threads == 0) throw InvalidArgument("--threads must be positive");
}

unsigned resolve_thread_count(const CliCommand& c) {
  if (c.threads) return *c.threads;
  if (const char* env = std::getenv("SF_THREADS"); env != nullptr && *env != '\0') {
    unsigned value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
      throw InvalidArgument("SF_THREADS must be a positive integer, got '" + std::string(text) + "'");
    }
    return value;
  }
  return 1;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument(path.string() + ": cannot open for writing");
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(path.string() + ": cannot open file");
  return in;
}

void write_sidecar(const std::filesystem::path& output, const json& doc) {
  auto out = open_output(sidecar_path(output));
  out << doc.dump(2) << '\n';
}

ExperimentSpec load_spec(const CliCommand& c, json* raw = nullptr) {
  json doc = load_json_file(c.config_path);
  ExperimentSpec spec = experiment_from_json(doc);
  if (c.seed_override) spec.master_seed = *c.seed_override;
  if (raw != nullptr) *raw = std::move(doc);
  return spec;
}

json one_based(const SparsityPattern& pattern) {
  json out = json::array();
  for (std::size_t i : pattern.indices()) out.push_back(i + 1);
  return out;
}

int do_gen(const CliCommand& c, std::ostream& out) {
  const ExperimentSpec spec = load_spec(c);
  const InstanceHeader header{spec.p, spec.n, spec.s, spec.sigma, spec.master_seed};
  json meta = {{"verb", "gen"}, {"experiment", experiment_to_json(spec)}, {"trial", c.trial}};
  Matrix y, theta;
  if (spec.robust_model()) {
    RobustInstance inst = gen_robust_instance(spec, c.trial);
    meta["support"] = one_based(inst.support);
    meta["mu"] = std::vector<double>(inst.mu.data(), inst.mu.data() + inst.mu.size());
    y = std::move(inst.y);
    theta = std::move(inst.theta);
  } else {
    FunctionalInstance inst = gen_functional_instance(spec, c.trial);
    meta["support"] = one_based(inst.support);
    y = std::move(inst.y);
    theta = std::move(inst.theta);
  }
  {
    auto file = open_output(c.output_path);
    write_instance_csv(file, header, y);
  }
  std::filesystem::path theta_path = c.output_path;
  theta_path += ".theta.csv";
  {
    auto file = open_output(theta_path);
    write_instance_csv(file, header, theta);
  }
  write_sidecar(c.output_path, meta);
  out << "wrote " << c.output_path.string() << " and " << theta_path.string() << '\n';
  return 0;
}

int do_estimate(const CliCommand& c, std::ostream& out) {
  InstanceFile file = [&] {
    auto in = open_input(c.input_path);
    return read_instance_csv(in);
  }();
  ExperimentSpec spec;
  if (!c.config_path.empty()) spec = load_spec(c);
  spec.p = file.header.p;
  spec.n = file.header.n;
  spec.s = file.header.s;
  spec.sigma = file.header.sigma;
  if (c.delta) spec.delta = *c.delta;
  if (!c.estimator.empty()) {
    const auto kind = parse_estimator_kind(c.estimator);
    if (!kind) throw InvalidArgument("--estimator: unknown estimator '" + c.estimator + "'");
    EstimatorConfig cfg;
    cfg.kind = *kind;
    spec.estimators = {cfg};
  }
  if (spec.estimators.empty()) throw InvalidArgument("estimate: no estimator configured");

  std::optional<SparsityPattern> truth;
  if (const auto side = sidecar_path(c.input_path); std::filesystem::exists(side)) {
    const json meta = load_json_file(side);
    if (meta.contains("support") && meta["support"].is_array()) {
      std::vector<std::size_t> idx;
      for (const auto& v : meta["support"]) {
        if (!v.is_number_integer() || v.get<long long>() < 1) {
          throw ConfigError(side.string() + ": support must hold 1-based column indices");
        }
        idx.push_back(v.get<std::size_t>() - 1);
      }
      truth = SparsityPattern(spec.n, std::move(idx));
    }
  }

  json results = json::array();
  std::ostringstream text;
  for (const auto& cfg : spec.estimators) {
    const EstimateResult r = apply_estimator(spec, cfg, file.y, truth ? &*truth : nullptr);
    json warnings = json::array();
    for (Warning w : r.warnings) warnings.push_back(warning_code(w));
    if (c.format == Format::json) {
      json row = {{"estimator", cfg.label()},
                  {"estimate", std::vector<double>(r.estimate.data(), r.estimate.data() + r.estimate.size())},
                  {"support", r.support ? one_based(*r.support) : json(nullptr)},
                  {"warnings", warnings}};
      results.push_back(std::move(row));
    } else {
      text << "estimator," << cfg.label() << '\n' << "estimate";
      for (Eigen::Index j = 0; j < r.estimate.size(); ++j) text << ',' << format_real(r.estimate(j));
      text << '\n';
      if (r.support) {
        text << "support";
        for (std::size_t i : r.support->indices()) text << ',' << i + 1;
        text << '\n';
      }
      text << "warnings";
      for (Warning w : r.warnings) text << ',' << warning_code(w);
      text << '\n';
    }
  }
  const std::string body = c.format == Format::json ? results.dump(2) + "\n" : text.str();
  if (c.output_path.empty()) {
    out << body;
  } else {
    auto file_out = open_output(c.output_path);
    file_out << body;
    write_sidecar(c.output_path, {{"verb", "estimate"},
                                  {"input", c.input_path.string()},
                                  {"experiment", experiment_to_json(spec)}});
  }
  return 0;
}

void write_table(const CliCommand& c, const std::vector<RiskReport>& rows) {
  auto file = open_output(c.output_path);
  if (c.format == Format::json) {
    file << risk_to_json(rows, c.timing).dump(2) << '\n';
  } else {
    write_risk_csv(file, rows, c.timing);
  }
}

int do_bench(const CliCommand& c, std::ostream& out) {
  const ExperimentSpec spec = load_spec(c);
  const auto rows = mc_risk(spec, RunOptions{resolve_thread_count(c)});
  write_table(c, rows);
  write_sidecar(c.output_path, {{"verb", "bench"}, {"experiment", experiment_to_json(spec)}});
  out << "wrote " << rows.size() << " rows to " << c.output_path.string() << '\n';
  return 0;
}

int do_sweep(const CliCommand& c, std::ostream& out) {
  json doc;
  const ExperimentSpec spec = load_spec(c, &doc);
  const SweepSpec sweep = sweep_from_json(doc);
  const auto rows = rate_sweep(spec, sweep.axis, sweep.values, RunOptions{resolve_thread_count(c)});
  write_table(c, rows);
  write_sidecar(c.output_path, {{"verb", "sweep"},
                                {"experiment", experiment_to_json(spec)},
                                {"sweep", sweep_to_json(sweep)}});
  out << "wrote " << rows.size() << " rows to " << c.output_path.string() << '\n';
  return 0;
}

int do_verify(const CliCommand& c, std::ostream& out) {
  LemmaSuiteOptions options;
  if (c.seed_override) options.seed = *c.seed_override;
  if (c.lemma_trials) options.trials = *c.lemma_trials;
  options.threads = resolve_thread_count(c);
  const auto checks = run_lemma_suite(options);

  std::size_t failed = 0;
  json rows = json::array();
  std::ostringstream csv;
  csv << "check,parameters,bound,empirical,half_width,trials,holds\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %-28s %14s %14s %12s %7s  %s\n", "check", "parameters",
                "bound", "empirical", "half_width", "trials", "result");
  out << line;
  for (const auto& check : checks) {
    const BoundReport& r = check.report;
    if (!r.holds_with_slack) ++failed;
    std::snprintf(line, sizeof line, "%-26s %-28s %14.6g %14.6g %12.4g %7zu  %s\n",
                  check.name.c_str(), check.parameters.c_str(), r.bound_value, r.empirical_value,
                  r.half_width, r.trials, r.holds_with_slack ? "PASS" : "FAIL");
    out << line;
    csv << check.name << ",\"" << check.parameters << "\"," << format_real(r.bound_value) << ','
        << format_real(r.empirical_value) << ',' << format_real(r.half_width) << ',' << r.trials
        << ',' << (r.holds_with_slack ? "true" : "false") << '\n';
    rows.push_back({{"check", check.name},
                    {"parameters", check.parameters},
                    {"bound", r.bound_value},
                    {"empirical", r.empirical_value},
                    {"half_width", r.half_width},
                    {"trials", r.trials},
                    {"holds", r.holds},
                    {"holds_with_slack", r.holds_with_slack}});
  }
  out << (failed == 0 ? "all " + std::to_string(checks.size()) + " checks hold\n"
                      : std::to_string(failed) + " of " + std::to_string(checks.size()) +
                            " checks FAILED\n");
  if (!c.output_path.empty()) {
    auto file = open_output(c.output_path);
    file << (c.format == Format::json ? rows.dump(2) + "\n" : csv.str());
    write_sidecar(c.output_path, {{"verb", "verify"},
                                  {"seed", options.seed},
                                  {"trials", options.trials},
                                  {"generator", kGeneratorId}});
  }
  return failed == 0 ? 0 : 2;
}

int do_plot(const CliCommand& c, std::ostream& out) {
  auto in = open_input(c.input_path);
  const auto rows = read_risk_csv(in);
  if (rows.empty()) throw InvalidArgument(c.input_path.string() + ": no rows");

  SweepAxis axis = SweepAxis::p;
  if (!c.axis.empty()) {
    axis = *parse_axis(c.axis);
  } else {
    for (SweepAxis candidate : {SweepAxis::p, SweepAxis::n, SweepAxis::s}) {
      const auto value = [&](const RiskReport& r) {
        return candidate == SweepAxis::p ? r.p : candidate == SweepAxis::n ? r.n : r.s;
      };
      const bool varies = std::any_of(rows.begin(), rows.end(),
                                      [&](const RiskReport& r) { return value(r) != value(rows[0]); });
      if (varies) {
        axis = candidate;
        break;
      }
    }
  }

  std::vector<PlotSeries> series;
  std::map<std::string, std::size_t> slot;
  for (const auto& r : rows) {
    auto [it, inserted] = slot.try_emplace(r.estimator_id, series.size());
    if (inserted) series.push_back({r.estimator_id, {}, {}});
    PlotSeries& s = series[it->second];
    const std::size_t x = axis == SweepAxis::p ? r.p : axis == SweepAxis::n ? r.n : r.s;
    s.x.push_back(static_cast<double>(x));
    s.y.push_back(r.mean_sq_error);
  }
  PlotOptions options;
  options.title = "MSE vs " + std::string(axis_name(axis));
  options.x_label = std::string(axis_name(axis));
  auto file = open_output(c.output_path);
  file << render_loglog_svg(series, options);
  out << "wrote " << c.output_path.string() << '\n';
  return 0;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p += ".config.json";
  return p;
}

int run(const CliCommand& command, std::ostream& out, std::ostream& err) {
  try {
    validate_flags(command);
    switch (command.verb) {
      case Verb::gen: return do_gen(command, out);
      case Verb::estimate: return do_estimate(command, out);
      case Verb::bench: return do_bench(command, out);
      case Verb::sweep: return do_sweep(command, out);
      case Verb::verify: return do_verify(command, out);
      case Verb::plot: return do_plot(command, out);
    }
    return 2;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation of linear functionals of sparse matrices: simulation and benchmarks"};
  app.require_subcommand(1);
  CliCommand command;
  std::string format = "csv";
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;

  const auto common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("--config", command.config_path, "experiment JSON");
    sub->add_option("--out", command.output_path, "output file");
    sub->add_option("--seed", seed, "override master_seed");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads (default: SF_THREADS or 1)");
  };

  std::map<CLI::App*, Verb> verbs;
  auto* gen = app.add_subcommand("gen", "generate one instance as CSV");
  common(gen, true);
  gen->add_option("--trial", command.trial, "trial index of the instance");
  verbs[gen] = Verb::gen;

  auto* estimate = app.add_subcommand("estimate", "apply estimators to an instance CSV");
  common(estimate, true);
  estimate->add_option("--input", command.input_path, "instance CSV");
  estimate->add_option("--estimator", command.estimator, "estimator kind when no config is given");
  estimate->add_option("--delta", command.delta, "confidence parameter (default 0.1)");
  verbs[estimate] = Verb::estimate;

  auto* bench = app.add_subcommand("bench", "Monte Carlo risk table");
  common(bench, true);
  bench->add_flag("--timing", command.timing, "record wall time (makes output run dependent)");
  verbs[bench] = Verb::bench;

  auto* sweep = app.add_subcommand("sweep", "risk table over a grid of p, n or s");
  common(sweep, true);
  sweep->add_flag("--timing", command.timing, "record wall time (makes output run dependent)");
  verbs[sweep] = Verb::sweep;

  auto* verify = app.add_subcommand("verify", "Monte Carlo checks of the tail and norm bounds");
  common(verify, false);
  verify->add_option("--trials", command.lemma_trials, "draws per check");
  verbs[verify] = Verb::verify;

  auto* plot = app.add_subcommand("plot", "log-log SVG of a risk table");
  plot->add_option("--input", command.input_path, "risk CSV");
  plot->add_option("--out", command.output_path, "SVG file");
  plot->add_option("--axis", command.axis, "p, n or s");
  verbs[plot] = Verb::plot;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  for (const auto& [sub, verb] : verbs) {
    if (sub->parsed()) command.verb = verb;
  }
  command.format = format == "json" ? Format::json : Format::csv;
  command.threads = threads;
  command.seed_override = seed;
  return run(command, out, err);
}

}  // namespace sf::cli
