#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sf {

// Column-major, so Y.col(i) is a contiguous observation vector.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when an input violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws InvalidArgument unless M has at least one row and column and only
/// finite entries.
void validate_matrix(const Matrix& m, std::string_view what = "matrix");

void require_positive(double value, std::string_view what);
void require_open_unit(double value, std::string_view what);

/// Sorted, duplicate-free set of column indices drawn from {0, ..., n-1}.
///
/// Indices are 0-based in the API; `to_string()` renders them 1-based for
/// human-facing output.
class SparsityPattern {
 public:
  SparsityPattern() = default;
  SparsityPattern(std::size_t universe, std::vector<std::size_t> indices);

  static SparsityPattern full(std::size_t universe);
  static SparsityPattern empty_of(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t index) const;
  std::span<const std::size_t> indices() const noexcept { return indices_; }

  /// Space separated, 1-based, e.g. "{1 4 7}".
  std::string to_string() const;

  bool operator==(const SparsityPattern&) const = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::size_t> indices_;
};

/// Known noise level of the Gaussian observations.
struct NoiseModel {
  double sigma;

  explicit NoiseModel(double s) : sigma(s) { require_positive(s, "sigma"); }
};

enum class Warning {
  gss_cap_binding,
  sparsity_guard_violated,
  ist_gamma_condition_unmet,
  group_lasso_not_converged,
  envelope_inapplicable,
  no_outliers_declared,
};

std::string_view warning_code(Warning w);

struct EstimateResult {
  Vector estimate;
  std::optional<SparsityPattern> support;
  std::size_t iterations = 0;
  std::vector<Warning> warnings;

  bool has_warning(Warning w) const;
  void add_warning(Warning w);
};

/// Sum of the columns, M * 1_n.
Vector linear_functional(const Matrix& m);

/// Average of the columns, (1/n) M * 1_n.
Vector normalized_functional(const Matrix& m);

/// M * (I_n - J_n / n): every column minus the column average. Requires n >= 2.
Matrix center_columns(const Matrix& m);

Vector column_norms(const Matrix& m);

/// Sum of the columns of M whose indices lie in `columns`.
Vector sum_columns(const Matrix& m, const SparsityPattern& columns);

}  // namespace sf
