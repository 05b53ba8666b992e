#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace mairs {

/// splitmix64 finalizer; stable across platforms.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combiner for deriving per-work-item seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// Deterministic draws on top of mt19937_64 (whose sequence the standard pins down).
/// Normals come from a local Box-Muller so results do not depend on the standard
/// library's std::normal_distribution algorithm.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal N(0, 1).
    double normal();
    /// Circularly-symmetric complex Gaussian, unit variance: E|z|^2 = 1.
    std::complex<double> complex_normal();

  private:
    std::mt19937_64 engine_;
    bool has_spare_{false};
    double spare_{0.0};
};

} // namespace mairs
