#include "helpers.hpp"
#include "sf/bounds.hpp"
#include "sf/functional_estimators.hpp"

#include <doctest.h>

#include <cmath>

using namespace sf;
using sf::test::from_columns;
using sf::test::vec;

namespace {

GssConfig config(double lambda, std::optional<std::size_t> cap = std::nullopt) {
  GssConfig c;
  c.lambda_override = lambda;
  c.cardinality_cap = cap;
  return c;
}

// Fixed 4 x 8 instance with one strong column (column 3); see tests/oracle.
Matrix adaptive_instance() {
  return from_columns({
      {-0.8019314252534474, 0.7487457707345911, -0.08369619281702581, 0.40963782655711695},
      {-1.324358995628145, 1.6347830429585775, -1.1632259734447485, 0.8298553070613239},
      {5.751638377904752, -4.727231224155278, 3.3707119059384456, 5.356976628594323},
      {0.4204452380655215, -1.2333286640307717, -0.48800582327685743, -0.256730126365494},
      {1.1360465324896427, -0.9582652054360887, -0.7133133716322436, -0.9807473560440125},
      {0.10970639932180819, 1.6000190889991115, 0.5533784703532895, -0.17315522486203205},
      {-0.5526473205362324, 0.2028824405086084, -0.06308597192528916, -1.2894187467538587},
      {-0.7847803553442784, -1.7321348424395848, -0.5894312580326048, 0.0206903940375912},
  });
}

}  // namespace

TEST_SUITE("gss") {
  TEST_CASE("lambda and threshold") {
    CHECK(gss_lambda(12, 0.1) == doctest::Approx(1.5 * std::log(240.0)));
    CHECK(GssConfig{}.lambda(12) == gss_lambda(12, 0.1));
    CHECK(gss_selection_threshold(1.0, 1.0, 2, 1) == doctest::Approx(36.0));
    CHECK(gss_selection_threshold(2.0, 1.5, 3, 2) == doctest::Approx(48.0 * (6 + 6)));
    CHECK(GssConfig{}.cap(8) == 8);
    CHECK(GssConfig{}.cap(40) == 12);
  }

  TEST_CASE("zero data selects nothing") {
    const auto r = gss_estimate(Matrix::Zero(3, 5), GssConfig{});
    CHECK(r.estimate == Vector::Zero(3));
    CHECK(r.support->empty());
    CHECK(r.iterations == 1);
  }

  TEST_CASE("one dominant column") {
    const Matrix y = from_columns({{0, 0}, {10, 10}, {0, 0}, {0, 0}});
    const auto r = gss_estimate(y, config(1.0));
    CHECK(r.estimate == vec({10, 10}));
    CHECK(r.support->to_string() == "{2}");
    CHECK(r.iterations == 2);
    const auto ref = gss_bruteforce(y, 1.0, 1.0);
    CHECK(ref.estimate == r.estimate);
    CHECK(ref.support == *r.support);
  }

  TEST_CASE("minimum cardinality, lexicographic first") {
    // Each column alone fails (p = 1, lambda = 1: threshold 24); any pair of
    // the first three passes (threshold 72), the leftover pair does not.
    const Matrix y = from_columns({{4.5}, {4.8}, {4.6}, {0.0}});
    const auto r = gss_estimate(y, config(1.0));
    CHECK(r.support->to_string() == "{1 2}");
    CHECK(r.estimate(0) == doctest::Approx(9.3));
    CHECK(r.iterations == 2);
  }

  TEST_CASE("cap binding is flagged") {
    // Only the full triple passes (p = 1, lambda = 0.01: 12 * (k + 0.01 k^2)).
    const Matrix y = from_columns({{2.2}, {2.2}, {2.2}});
    const auto capped = gss_estimate(y, config(0.01, 2));
    CHECK(capped.support->empty());
    CHECK(capped.has_warning(Warning::gss_cap_binding));
    const auto full = gss_estimate(y, config(0.01, 3));
    CHECK(full.support->size() == 3);
    CHECK_FALSE(full.has_warning(Warning::gss_cap_binding));
  }

  TEST_CASE("search guard") {
    GssConfig c;
    c.cardinality_cap = 21;
    const Matrix y = Matrix::Zero(2, 31);
    CHECK_THROWS_AS(gss_estimate(y, c), InvalidArgument);
    c.cardinality_cap = 0;
    CHECK_THROWS_AS(gss_estimate(y, c), InvalidArgument);
    c.cardinality_cap = 32;
    CHECK_THROWS_AS(gss_estimate(y, c), InvalidArgument);
  }

  TEST_CASE("cross check with the brute force reference") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      RandomStream rng(seed);
      Matrix y = test::gaussian_matrix(3, 7, 1000 + seed);
      for (Eigen::Index i = 0; i < 7; ++i) {
        if (rng.uniform() < 0.4) y.col(i) += rng.on_sphere(3, 4.0 + 6.0 * rng.uniform());
      }
      const double lambda = gss_lambda(7, 0.1);
      GssConfig c;
      c.cardinality_cap = 7;
      const auto r = gss_estimate(y, c);
      const auto ref = gss_bruteforce(y, 1.0, lambda);
      CHECK(*r.support == ref.support);
      CHECK(r.estimate == ref.estimate);
    }
  }

  TEST_CASE("property: no passing subset remains after termination") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Matrix y = test::gaussian_matrix(4, 9, 500 + seed);
      y.col(static_cast<Eigen::Index>(seed % 9)).array() += 5.0;
      y.col(static_cast<Eigen::Index>((seed + 4) % 9)).array() -= 4.0;
      GssConfig c;
      c.cardinality_cap = 5;
      const auto r = gss_estimate(y, c);
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < 9; ++i) {
        if (!r.support->contains(i)) rest.push_back(i);
      }
      CHECK_FALSE(gss_find_passing_subset(y, rest, 1.0, c.lambda(9), 5).has_value());
    }
  }

  TEST_CASE("property: permutation maps the selected support") {
    // When every round selects a single column, the selected set is the set
    // of passing singletons, so supports correspond under any permutation.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Matrix y = test::gaussian_matrix(3, 8, 700 + seed);
      y.col(2).array() += 8.0;
      y.col(5).array() -= 8.0;
      const auto r = gss_estimate(y, GssConfig{});
      const std::vector<std::size_t> rev = {7, 6, 5, 4, 3, 2, 1, 0};
      Matrix yr(3, 8);
      for (std::size_t i = 0; i < 8; ++i) yr.col(static_cast<Eigen::Index>(i)) = y.col(static_cast<Eigen::Index>(rev[i]));
      const auto rr = gss_estimate(yr, GssConfig{});
      const bool singletons = r.iterations == r.support->size() + 1 && rr.iterations == rr.support->size() + 1;
      CHECK(r.support->size() == 2);
      if (singletons) {
        std::vector<std::size_t> image;
        for (std::size_t i : rr.support->indices()) image.push_back(rev[i]);
        CHECK(SparsityPattern(8, image) == *r.support);
        CHECK(test::max_abs_diff(r.estimate, rr.estimate) <= 1e-12);
      }
    }
  }

  TEST_CASE("adaptive GSS") {
    // With Y = 0, dist = 0 and s_hat = 1; the branch then depends on (p, n)
    // only: 60 (p + lambda) against n (2p + 3 log(2 / delta)).
    const auto zero = adgss_estimate(Matrix::Zero(4, 100), 1.0, 0.1, 2);
    CHECK(zero.gss_branch);
    CHECK(zero.result.estimate == Vector::Zero(4));
    CHECK(zero.s_hat == 1);
    const auto small = adgss_estimate(Matrix::Zero(4, 6), 1.0, 0.1);
    CHECK_FALSE(small.gss_branch);
    CHECK(small.s_hat == 1);
    CHECK(small.result.estimate == Vector::Zero(4));
    CHECK(adgss_naive_radius_sq(4, 8, 0.1) == doctest::Approx(64 + 24 * std::log(20.0)));

    // Hand trace: lambda = 1.5 log 320, no subset passes, dist = ||L(Y)||,
    // s_hat = 1 and 60 (p + lambda) > 2np + 3n log 20, so the naive branch fires.
    const Matrix y = adaptive_instance();
    const auto r = adgss_estimate(y, 1.0, 0.1);
    CHECK(r.lambda == doctest::Approx(8.652481493690658).epsilon(1e-12));
    CHECK(r.dist == doctest::Approx(7.182526924678394).epsilon(1e-12));
    CHECK(r.s_hat == 1);
    CHECK_FALSE(r.gss_branch);
    CHECK(r.result.estimate == naive_estimate(y).estimate);
  }
}
