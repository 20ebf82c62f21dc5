/**
 * @file random.h
 * @brief Deterministic, portable random source for benchmark generation
 */

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace clipper {

/// Seedable random source built on std::mt19937_64 with hand-rolled scalar
/// transforms, so that generated sequences depend only on the seed and not
/// on the standard library's distribution implementations.
///
/// Stream splitting: independent substreams are derived with
/// Rng::derive(seed, stream), a splitmix64 mix of the two words. The
/// benchmark generator documents which stream index feeds which stage.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Raw 64 random bits.
  std::uint64_t next() { return gen_(); }

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Rejection-debiased.
  int uniformInt(int n);

  /// Standard normal via Box-Muller (two uniform draws per call).
  double normal();

  /// Isotropic Gaussian 3-vector with standard deviation sigma per axis.
  Eigen::Vector3d normal3(double sigma);

  /// Derives a substream seed: splitmix64 applied to seed ^ mixed(stream).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 gen_;
};

}  // namespace clipper
