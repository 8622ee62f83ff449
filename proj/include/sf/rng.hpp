#pragma once

#include "sf/core.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace sf {

/// Identifies the generator pinned for all simulated data; recorded in run
/// metadata so that tables can be regenerated bit-for-bit.
inline constexpr std::string_view kGeneratorId = "mt19937_64+splitmix64-seed+marsaglia-polar";

/// SplitMix64 finalizer applied to (master, index). Pure function, so every
/// trial owns an independent stream regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic uniform / Gaussian stream.
///
/// The standard library's distribution objects are implementation defined, so
/// the transforms from raw 64-bit words are done here: 53-bit uniforms and
/// Marsaglia's polar method for normals.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double gaussian();
  /// Uniform on {0, ..., bound - 1}; bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Fills column by column.
  void fill_gaussian(Matrix& m);
  Vector gaussian_vector(Eigen::Index size);
  /// Uniform direction scaled to `radius`.
  Vector on_sphere(Eigen::Index size, double radius);
  /// Fisher-Yates shuffle of {0, ..., size - 1}.
  std::vector<std::size_t> permutation(std::size_t size);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sf
