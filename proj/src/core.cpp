#include "sf/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sf {

void validate_matrix(const Matrix& m, std::string_view what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw InvalidArgument(std::string(what) + ": needs at least one row and one column");
  }
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + ": entries must be finite");
  }
}

void require_positive(double value, std::string_view what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be a positive finite number");
  }
}

void require_open_unit(double value, std::string_view what) {
  if (!(value > 0.0 && value < 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in (0, 1)");
  }
}

SparsityPattern::SparsityPattern(std::size_t universe, std::vector<std::size_t> indices)
    : universe_(universe), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw InvalidArgument("sparsity pattern: duplicate column index");
  }
  if (!indices_.empty() && indices_.back() >= universe_) {
    throw InvalidArgument("sparsity pattern: column index out of range");
  }
}

SparsityPattern SparsityPattern::full(std::size_t universe) {
  std::vector<std::size_t> all(universe);
  for (std::size_t i = 0; i < universe; ++i) all[i] = i;
  return SparsityPattern(universe, std::move(all));
}

SparsityPattern SparsityPattern::empty_of(std::size_t universe) {
  return SparsityPattern(universe, {});
}

bool SparsityPattern::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::string SparsityPattern::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) out << ' ';
    out << indices_[k] + 1;
  }
  out << '}';
  return out.str();
}

std::string_view warning_code(Warning w) {
  switch (w) {
    case Warning::gss_cap_binding: return "gss_cap_binding";
    case Warning::sparsity_guard_violated: return "sparsity_guard_violated";
    case Warning::ist_gamma_condition_unmet: return "ist_gamma_condition_unmet";
    case Warning::group_lasso_not_converged: return "group_lasso_not_converged";
    case Warning::envelope_inapplicable: return "envelope_inapplicable";
    case Warning::no_outliers_declared: return "no_outliers_declared";
  }
  return "unknown";
}

bool EstimateResult::has_warning(Warning w) const {
  return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

void EstimateResult::add_warning(Warning w) {
  if (!has_warning(w)) warnings.push_back(w);
}

Vector linear_functional(const Matrix& m) { return m.rowwise().sum(); }

Vector normalized_functional(const Matrix& m) {
  return linear_functional(m) / static_cast<double>(m.cols());
}

Matrix center_columns(const Matrix& m) {
  if (m.cols() < 2) {
    throw InvalidArgument("center_columns: degenerate projection for a single column (n = 1)");
  }
  return m.colwise() - normalized_functional(m);
}

Vector column_norms(const Matrix& m) { return m.colwise().norm().transpose(); }

Vector sum_columns(const Matrix& m, const SparsityPattern& columns) {
  if (columns.universe() != static_cast<std::size_t>(m.cols())) {
    throw InvalidArgument("sparsity pattern universe does not match the number of columns");
  }
  Vector total = Vector::Zero(m.rows());
  for (std::size_t i : columns.indices()) total += m.col(static_cast<Eigen::Index>(i));
  return total;
}

}  // namespace sf
