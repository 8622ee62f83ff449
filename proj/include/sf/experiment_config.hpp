#pragma once

// JSON schema for experiment files; see docs/formats.md.

#include "sf/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace sf {

/// Malformed or inconsistent configuration. The message names the offending
/// field (or the parse position).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

nlohmann::json load_json_file(const std::filesystem::path& path);

ExperimentSpec experiment_from_json(const nlohmann::json& doc);
/// Fully resolved form, defaults included; parses back to an equal spec.
nlohmann::json experiment_to_json(const ExperimentSpec& spec);

EstimatorConfig estimator_from_json(const nlohmann::json& doc, const std::string& path);
nlohmann::json estimator_to_json(const EstimatorConfig& cfg);

struct SweepSpec {
  SweepAxis axis = SweepAxis::p;
  std::vector<std::size_t> values;
};

/// Reads the "sweep" object of a sweep config.
SweepSpec sweep_from_json(const nlohmann::json& doc);
nlohmann::json sweep_to_json(const SweepSpec& sweep);

}  // namespace sf
