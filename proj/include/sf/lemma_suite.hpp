#pragma once

#include "sf/bounds.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sf {

struct LemmaCheck {
  std::string name;
  std::string parameters;
  BoundReport report;
};

struct LemmaSuiteOptions {
  std::uint64_t seed = 20180521;
  std::size_t trials = 4000;
  unsigned threads = 1;
};

/// Pairs every analytic bound evaluator with a seeded Monte Carlo estimate of
/// the quantity it bounds.
std::vector<LemmaCheck> run_lemma_suite(const LemmaSuiteOptions& options = {});

}  // namespace sf
