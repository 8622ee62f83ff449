#include "helpers.hpp"
#include "sf/bounds.hpp"
#include "sf/functional_estimators.hpp"
#include "sf/lemma_suite.hpp"

#include <doctest.h>

#include <cmath>

using namespace sf;
using sf::test::from_columns;
using sf::test::vec;

TEST_SUITE("bounds") {
  TEST_CASE("chi-squared tail") {
    CHECK(chi2_tail_bound(4, 4.0) == doctest::Approx(0.7788007830714049).epsilon(1e-12));
    CHECK(chi2_tail_bound(1, 8.0) == doctest::Approx(0.1353352832366127).epsilon(1e-12));
    CHECK(chi2_tail_bound(5, 1e-9) == doctest::Approx(1.0));
  }

  TEST_CASE("truncated chi-squared mean") {
    CHECK(chi2_truncated_mean_bound(2, 10.0) == doctest::Approx(1.641699972477976).epsilon(1e-12));
    CHECK(chi2_truncated_mean_bound(10, 10.0) == doctest::Approx(14.632312578932837).epsilon(1e-12));
    CHECK_THROWS_AS(chi2_truncated_mean_bound(1, 3.0), InvalidArgument);
    // Nonincreasing in x on each branch.
    for (double x = 1; x < 39; x += 1) CHECK(chi2_truncated_mean_bound(10, x + 1) <= chi2_truncated_mean_bound(10, x));
    for (double x = 40; x < 80; x += 1) CHECK(chi2_truncated_mean_bound(10, x + 1) <= chi2_truncated_mean_bound(10, x));
  }

  TEST_CASE("centered column norm bound") {
    CHECK(centered_column_norm_bound(10, 100, 0.1) == doctest::Approx(130.5240844637142).epsilon(1e-12));
    CHECK(centered_column_norm_bound(11, 100, 0.1) > centered_column_norm_bound(10, 100, 0.1));
    CHECK(centered_column_norm_bound(10, 101, 0.1) > centered_column_norm_bound(10, 100, 0.1));
    CHECK(centered_column_norm_bound(10, 100, 0.2) < centered_column_norm_bound(10, 100, 0.1));
  }

  TEST_CASE("Gaussian matrix norm bounds") {
    const auto b = gaussian_matrix_norm_bounds(4, 4, 0.0);
    CHECK(b.deviation_bound == doctest::Approx(4.0));
    CHECK(b.expectation_sq_bound == doctest::Approx(36.0));
    CHECK(b.failure_probability == doctest::Approx(2.0));
    CHECK(gaussian_matrix_norm_bounds(9, 16, 1.0).deviation_bound == doctest::Approx(8.0));
  }

  TEST_CASE("projection cone") {
    const Matrix on_support = from_columns({{1, 2}, {0, 0}, {-3, 1}, {0, 0}});
    CHECK(projection_cone_check(on_support, SparsityPattern(4, {0, 2}), 0.5).holds);
    const Matrix single = from_columns({{1, 1}, {0, 0}, {0, 0}, {0, 0}});
    const auto r = projection_cone_check(single, SparsityPattern(4, {0}), 1.0);
    CHECK(r.holds);
    CHECK(r.bound_value == doctest::Approx(0.0));
    const Matrix outside = from_columns({{0, 0}, {5, 5}});
    CHECK_THROWS_AS(projection_cone_check(outside, SparsityPattern(2, {0}), 1.0), InvalidArgument);
  }

  TEST_CASE("projection cone at a = 3, |S| / n = 1/32") {
    RandomStream rng(64);
    const SparsityPattern support(64, {3, 40});
    for (int draw = 0; draw < 200; ++draw) {
      Matrix u(4, 64);
      rng.fill_gaussian(u);
      double on = 0, off = 0;
      for (Eigen::Index i = 0; i < 64; ++i) {
        (support.contains(static_cast<std::size_t>(i)) ? on : off) += u.col(i).norm();
      }
      const double scale = 3.0 * on / off * rng.uniform();
      for (Eigen::Index i = 0; i < 64; ++i) {
        if (!support.contains(static_cast<std::size_t>(i))) u.col(i) *= scale;
      }
      CHECK(projection_cone_check(u, support, 3.0).holds);
    }
  }

  TEST_CASE("recursion envelope") {
    const double p = 100, a = 0.3;
    const auto k0 = recursion_envelope(5.0, 2, 4000, 100, a, 0);
    CHECK(k0.applicable);
    CHECK(k0.value == doctest::Approx(std::sqrt(p)));
    const double ratio = 33.0 * 33 * 4 / (4000.0 * 4000);
    CHECK(recursion_envelope(5.0, 2, 4000, 100, a, 60).value ==
          doctest::Approx(std::max(std::sqrt(p) * ratio, 2 * a)));
    double previous = k0.value;
    for (std::size_t k = 1; k < 12; ++k) {
      const double v = recursion_envelope(5.0, 2, 4000, 100, a, k).value;
      CHECK(v <= previous);
      previous = v;
    }
    CHECK_FALSE(recursion_envelope(11.0, 2, 4000, 100, a, 1).applicable);
    CHECK_FALSE(recursion_envelope(5.0, 20, 400, 100, a, 1).applicable);
    CHECK_FALSE(recursion_envelope(5.0, 2, 4000, 100, 6.0, 1).applicable);
  }

  TEST_CASE("numeric prox") {
    CHECK(prox_grouplasso_numeric(vec({3, 4}), 10.0) == Vector::Zero(2));
    CHECK(prox_grouplasso_numeric(vec({3, 4}), 0.0) == vec({3, 4}));
    CHECK(test::max_abs_diff(prox_grouplasso_numeric(vec({3, 4}), 5.0), vec({1.5, 2})) <= 1e-9);
    CHECK(prox_grouplasso_numeric(Vector::Zero(3), 1.0) == Vector::Zero(3));
  }

  TEST_CASE("property: numeric prox matches the closed form") {
    RandomStream rng(1000);
    for (int k = 0; k < 1000; ++k) {
      const Vector z = rng.gaussian_vector(1 + rng.below(8)) * (0.1 + 5 * rng.uniform());
      const double lambda = 4.0 * z.norm() * rng.uniform();
      const Vector closed = z * std::max(0.0, 1.0 - lambda / (2 * z.norm()));
      CHECK(test::max_abs_diff(prox_grouplasso_numeric(z, lambda), closed) <= 1e-6);
    }
  }

  TEST_CASE("brute force reference") {
    CHECK(gss_bruteforce(Matrix::Zero(3, 6), 1.0, 1.0).support.empty());
    CHECK_THROWS_AS(gss_bruteforce(Matrix::Zero(2, 15), 1.0, 1.0), InvalidArgument);
  }

  TEST_CASE("lemma suite holds with slack") {
    LemmaSuiteOptions o;
    o.trials = 1000;
    for (const auto& check : run_lemma_suite(o)) {
      INFO(check.name << " " << check.parameters);
      CHECK(check.report.holds_with_slack);
      CHECK(check.report.trials >= 1000);
    }
  }
}
