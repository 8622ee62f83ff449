#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace sf::cli {

enum class Verb { gen, estimate, bench, sweep, verify, plot };
enum class Format { csv, json };

struct CliCommand {
  Verb verb = Verb::verify;
  std::filesystem::path config_path;
  std::filesystem::path output_path;
  std::optional<std::uint64_t> seed_override;
  Format format = Format::csv;
  /// Falls back to SF_THREADS, then 1.
  std::optional<unsigned> threads;
  std::filesystem::path input_path;
  std::uint64_t trial = 0;
  bool timing = false;
  /// `estimate` without a config: estimator kind applied with default settings.
  std::string estimator;
  std::optional<double> delta;
  /// `plot`: p, n or s; inferred from the table when empty.
  std::string axis;
  std::optional<std::size_t> lemma_trials;
};

/// 0 success, 1 validation error or missing file, 2 internal failure (a failed
/// lemma check in `verify` also returns 2).
int run(const CliCommand& command, std::ostream& out, std::ostream& err);

/// Parses argv into a CliCommand and runs it.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// `<output>.config.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& output);

}  // namespace sf::cli
