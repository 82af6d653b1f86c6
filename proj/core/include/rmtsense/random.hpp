#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace rmtsense {

using Engine = std::mt19937_64;

/// Derives an independent child seed from a parent seed and a path of stream
/// indices (splitmix64 finalizer applied per component). Used to give every
/// snapshot, server and Haar factor its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Seed drawn from std::random_device, for callers that ask for fresh randomness.
std::uint64_t fresh_seed();

/// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
class ComplexGaussian {
 public:
  std::complex<double> operator()(Engine& engine) {
    return {normal_(engine) * kHalfRoot, normal_(engine) * kHalfRoot};
  }

 private:
  static constexpr double kHalfRoot = 0.70710678118654752440;
  std::normal_distribution<double> normal_;
};

/// i.i.d. standard normal draws, the white input of every real-valued generator.
std::vector<double> real_gaussian_series(std::size_t length, std::uint64_t seed);

}  // namespace rmtsense
