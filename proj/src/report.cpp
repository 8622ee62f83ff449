#include "sf/report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace sf {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidArgument(where + ": not a number: '" + t + "'");
  }
  return value;
}

template <class Int>
Int parse_int(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidArgument(where + ": not an integer: '" + t + "'");
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_risk_csv(std::ostream& out, const std::vector<RiskReport>& rows, bool timing) {
  out << kRiskCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.estimator_id << ',' << r.p << ',' << r.n << ',' << r.s << ',' << format_real(r.sigma)
        << ',' << r.trials << ',' << format_real(r.mean_sq_error) << ','
        << format_real(r.std_error) << ','
        << (r.deviation_bound ? format_real(*r.deviation_bound) : "") << ','
        << (r.violation_rate ? format_real(*r.violation_rate) : "") << ','
        << (timing ? r.wall_time_ms : 0) << '\n';
  }
}

std::vector<RiskReport> read_risk_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kRiskCsvHeader) {
    throw InvalidArgument("line 1: expected header '" + std::string(kRiskCsvHeader) + "'");
  }
  std::vector<RiskReport> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(number);
    const auto cells = split(trim(line), ',');
    if (cells.size() != 11) throw InvalidArgument(where + ": expected 11 columns");
    RiskReport r;
    r.estimator_id = cells[0];
    r.p = parse_int<std::size_t>(cells[1], where);
    r.n = parse_int<std::size_t>(cells[2], where);
    r.s = parse_int<std::size_t>(cells[3], where);
    r.sigma = parse_real(cells[4], where);
    r.trials = parse_int<std::size_t>(cells[5], where);
    r.mean_sq_error = parse_real(cells[6], where);
    r.std_error = parse_real(cells[7], where);
    if (!trim(cells[8]).empty()) r.deviation_bound = parse_real(cells[8], where);
    if (!trim(cells[9]).empty()) r.violation_rate = parse_real(cells[9], where);
    r.wall_time_ms = parse_int<std::int64_t>(cells[10], where);
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json risk_to_json(const std::vector<RiskReport>& rows, bool timing) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"estimator", r.estimator_id},
                          {"p", r.p},
                          {"n", r.n},
                          {"s", r.s},
                          {"sigma", r.sigma},
                          {"trials", r.trials},
                          {"mse", r.mean_sq_error},
                          {"stderr", r.std_error},
                          {"bound", nullptr},
                          {"violation_rate", nullptr},
                          {"wall_ms", timing ? r.wall_time_ms : 0},
                          {"warned_trials", r.warned_trials}};
    if (r.deviation_bound) row["bound"] = *r.deviation_bound;
    if (r.violation_rate) row["violation_rate"] = *r.violation_rate;
    out.push_back(std::move(row));
  }
  return out;
}

void write_instance_csv(std::ostream& out, const InstanceHeader& h, const Matrix& m) {
  out << "# p n s sigma seed\n";
  out << "# " << h.p << ' ' << h.n << ' ' << h.s << ' ' << format_real(h.sigma) << ' ' << h.seed
      << '\n';
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      if (j > 0) out << ',';
      out << format_real(m(j, i));
    }
    out << '\n';
  }
}

InstanceFile read_instance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "# p n s sigma seed") {
    throw InvalidArgument("line 1: expected '# p n s sigma seed'");
  }
  if (!std::getline(in, line) || trim(line).rfind('#', 0) != 0) {
    throw InvalidArgument("line 2: expected '# <p> <n> <s> <sigma> <seed>'");
  }
  const auto fields = split(trim(trim(line).substr(1)), ' ');
  std::vector<std::string> values;
  for (const auto& f : fields) {
    if (!f.empty()) values.push_back(f);
  }
  if (values.size() != 5) throw InvalidArgument("line 2: expected 5 header values");
  InstanceFile file;
  file.header.p = parse_int<std::size_t>(values[0], "line 2");
  file.header.n = parse_int<std::size_t>(values[1], "line 2");
  file.header.s = parse_int<std::size_t>(values[2], "line 2");
  file.header.sigma = parse_real(values[3], "line 2");
  file.header.seed = parse_int<std::uint64_t>(values[4], "line 2");
  if (file.header.p == 0 || file.header.n == 0) throw InvalidArgument("line 2: p and n must be positive");

  const auto p = static_cast<Eigen::Index>(file.header.p);
  const auto n = static_cast<Eigen::Index>(file.header.n);
  file.y.resize(p, n);
  Eigen::Index col = 0;
  std::size_t number = 2;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(number);
    if (col >= n) throw InvalidArgument(where + ": more than n = " + std::to_string(n) + " columns");
    const auto cells = split(trim(line), ',');
    if (static_cast<Eigen::Index>(cells.size()) != p) {
      throw InvalidArgument(where + ": expected " + std::to_string(p) + " values");
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      file.y(j, col) = parse_real(cells[static_cast<std::size_t>(j)], where);
    }
    ++col;
  }
  if (col != n) {
    throw InvalidArgument("expected " + std::to_string(n) + " columns, found " + std::to_string(col));
  }
  return file;
}

}  // namespace sf
