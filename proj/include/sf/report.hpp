#pragma once

// Text serialization of risk tables and generated instances; column contracts
// are in docs/formats.md.

#include "sf/harness.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace sf {

/// Seventeen significant digits, locale independent.
std::string format_real(double value);

inline constexpr const char* kRiskCsvHeader =
    "estimator,p,n,s,sigma,trials,mse,stderr,bound,violation_rate,wall_ms";

/// One row per report. Absent bound / violation rate are empty cells. wall_ms
/// is written as 0 unless `timing` is set, which keeps the table byte-stable.
void write_risk_csv(std::ostream& out, const std::vector<RiskReport>& rows, bool timing = false);
std::vector<RiskReport> read_risk_csv(std::istream& in);

nlohmann::json risk_to_json(const std::vector<RiskReport>& rows, bool timing = false);

struct InstanceHeader {
  std::size_t p = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// `# p n s sigma seed` followed by a comment row with the values, then one
/// CSV line per column of `m` (column-major).
void write_instance_csv(std::ostream& out, const InstanceHeader& header, const Matrix& m);

struct InstanceFile {
  InstanceHeader header;
  Matrix y;
};

/// Throws InvalidArgument naming the offending line.
InstanceFile read_instance_csv(std::istream& in);

}  // namespace sf
