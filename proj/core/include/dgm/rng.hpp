// rng.hpp — deterministic random number generation
//
// All randomness in the library flows through this header so that runs are
// bit-reproducible across platforms and standard-library versions.
// std::mt19937_64 is fully specified by the C++ standard, but the standard
// *distributions* are not (their output may differ between implementations),
// so the uniform and normal mappings are spelled out here:
//
//   uniform:  u = (x >> 11) * 2^-53            in [0, 1), 53-bit resolution
//   normal:   Box–Muller, r = sqrt(-2 ln u1),  z = r cos(2 pi u2)
//
// Independent streams are derived from a base seed with a splitmix64-style
// mix, so that e.g. "placement attempt #7 of graph seed 3" has a stable,
// collision-resistant seed of its own.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dgm {

// Mixes (seed, stream) into a new 64-bit seed. splitmix64 finalizer applied
// to the sum keeps derived streams decorrelated even for adjacent inputs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic generator: a seeded mt19937_64 plus fixed output mappings.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Next raw 64-bit engine word.
    std::uint64_t raw() { return engine_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box–Muller. Uses two fresh uniforms per draw and
    // returns the cosine branch; u1 is shifted into (0, 1] so log never sees 0.
    double normal() {
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double r  = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Normal with the given mean and standard deviation.
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is biased for huge n; all uses here have
        // n << 2^32 where the bias is far below any tolerance in play.
        return engine_() % n;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace dgm
