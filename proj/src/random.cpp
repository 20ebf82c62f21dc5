#include "clipper/random.h"

#include <cmath>
#include <numbers>

namespace clipper {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

int Rng::uniformInt(int n) {
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

double Rng::normal() {
  // Box-Muller, cosine branch only; u1 shifted away from zero.
  const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::Vector3d Rng::normal3(double sigma) {
  return {sigma * normal(), sigma * normal(), sigma * normal()};
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

}  // namespace clipper
