#include "sf/lemma_suite.hpp"

#include "sf/parallel.hpp"
#include "sf/rng.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <sstream>

namespace sf {

namespace {

struct Sample {
  double mean;
  double std_error;
};

// Draws are indexed, written to their own slot and reduced in index order.
Sample simulate(std::size_t trials, unsigned threads, std::uint64_t stream_seed,
                const std::function<double(RandomStream&)>& draw) {
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    RandomStream rng(derive_seed(stream_seed, t));
    values[t] = draw(rng);
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(trials))};
}

double chi2_draw(RandomStream& rng, std::size_t d) {
  double total = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double g = rng.gaussian();
    total += g * g;
  }
  return total;
}

double probability_half_width(double bound, std::size_t trials) {
  const double b = std::clamp(bound, 0.0, 1.0);
  return 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
}

std::string describe(std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, value] : params) {
    if (!first) out << ' ';
    out << key << '=' << value;
    first = false;
  }
  return out.str();
}

}  // namespace

std::vector<LemmaCheck> run_lemma_suite(const LemmaSuiteOptions& options) {
  if (options.trials < 2) throw InvalidArgument("lemma suite: needs at least 2 trials");
  const std::size_t trials = options.trials;
  std::vector<LemmaCheck> checks;
  std::uint64_t stream = 0;
  const auto next_seed = [&] { return derive_seed(options.seed, stream++); };

  for (auto [d, x] : {std::pair<std::size_t, double>{1, 8.0}, {4, 4.0}, {10, 20.0}, {10, 50.0}}) {
    const double bound = chi2_tail_bound(d, x);
    const Sample s = simulate(trials, options.threads, next_seed(), [d, x](RandomStream& rng) {
      return chi2_draw(rng, d) >= static_cast<double>(d) + x ? 1.0 : 0.0;
    });
    checks.push_back({"chi2_tail", describe({{"d", double(d)}, {"x", x}}),
                      make_bound_report(bound, s.mean, probability_half_width(bound, trials),
                                        trials)});
  }

  for (auto [d, x] : {std::pair<std::size_t, double>{2, 10.0}, {10, 10.0}, {10, 45.0}}) {
    const double bound = chi2_truncated_mean_bound(d, x);
    const Sample s = simulate(trials, options.threads, next_seed(), [d, x](RandomStream& rng) {
      const double eta = chi2_draw(rng, d);
      return eta >= static_cast<double>(d) + x ? eta : 0.0;
    });
    checks.push_back({"chi2_truncated_mean", describe({{"d", double(d)}, {"x", x}}),
                      make_bound_report(bound, s.mean, 3.0 * s.std_error, trials)});
  }

  {
    const std::size_t p = 10, n = 100;
    const double delta = 0.1;
    const double bound = centered_column_norm_bound(p, n, delta);
    const Sample s = simulate(trials, options.threads, next_seed(), [&](RandomStream& rng) {
      Matrix xi(p, n);
      rng.fill_gaussian(xi);
      const Vector mean = xi.rowwise().mean();
      const double worst = (xi.colwise() - mean).colwise().squaredNorm().maxCoeff();
      return worst > bound ? 1.0 : 0.0;
    });
    checks.push_back({"centered_column_norm",
                      describe({{"p", double(p)}, {"n", double(n)}, {"delta", delta}}),
                      make_bound_report(delta, s.mean, probability_half_width(delta, trials),
                                        trials)});
  }

  for (auto [rows, cols, t] : {std::tuple<std::size_t, std::size_t, double>{4, 4, 2.0},
                               {20, 10, 1.5}}) {
    const GaussianNormBounds b = gaussian_matrix_norm_bounds(rows, cols, t);
    const Sample s = simulate(trials, options.threads, next_seed(), [&](RandomStream& rng) {
      Matrix a(rows, cols);
      rng.fill_gaussian(a);
      const double norm = Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
      return norm > b.deviation_bound ? 1.0 : 0.0;
    });
    checks.push_back({"gaussian_norm_deviation",
                      describe({{"N", double(rows)}, {"n", double(cols)}, {"t", t}}),
                      make_bound_report(b.failure_probability, s.mean,
                                        probability_half_width(b.failure_probability, trials),
                                        trials)});
  }

  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{4, 4}, {20, 10}}) {
    const GaussianNormBounds b = gaussian_matrix_norm_bounds(rows, cols, 0.0);
    const Sample s = simulate(trials, options.threads, next_seed(), [&](RandomStream& rng) {
      Matrix a(rows, cols);
      rng.fill_gaussian(a);
      const double norm = Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
      return norm * norm;
    });
    checks.push_back({"gaussian_norm_expectation",
                      describe({{"N", double(rows)}, {"n", double(cols)}}),
                      make_bound_report(b.expectation_sq_bound, s.mean, 3.0 * s.std_error,
                                        trials)});
  }

  {
    // |S| / n = 1/32 and a = 3, the operating point of the group-lasso analysis.
    const std::size_t p = 4, n = 64;
    const double a = 3.0;
    const SparsityPattern support(n, {5, 40});
    const Sample s = simulate(trials, options.threads, next_seed(), [&](RandomStream& rng) {
      Matrix u(p, n);
      rng.fill_gaussian(u);
      double on = 0.0, off = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        (support.contains(i) ? on : off) += u.col(static_cast<Eigen::Index>(i)).norm();
      }
      const double target = a * on * rng.uniform();
      for (std::size_t i = 0; i < n; ++i) {
        if (!support.contains(i)) u.col(static_cast<Eigen::Index>(i)) *= target / off;
      }
      return projection_cone_check(u, support, a).holds ? 0.0 : 1.0;
    });
    checks.push_back({"projection_cone",
                      describe({{"p", double(p)}, {"n", double(n)}, {"s", 2.0}, {"a", a}}),
                      make_bound_report(0.0, s.mean * static_cast<double>(trials), 0.0, trials)});
  }

  return checks;
}

}  // namespace sf
