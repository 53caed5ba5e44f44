#pragma once

#include "tvtv/core.hpp"

#include <cstdint>
#include <random>

namespace tvtv {

// Seeded generator with platform-independent uniform and normal draws
// (the std distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
    // Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct SyntheticSpec {
    std::size_t rows = 64;
    std::size_t cols = 64;
    std::size_t bands = 8;
    std::size_t rectangles = 12;
    std::uint64_t seed = 1;
};

// Piecewise-constant cube: a background spectrum overlaid with axis-aligned
// rectangles, each carrying its own smooth spectrum. Values lie in
// [0.05, 0.95].
HsCube synthetic_cube(const SyntheticSpec& spec);

// Random nonnegative response with unit column sums. Retries until the
// matrix has full column rank.
SpectralMatrix random_csr(std::size_t s0, std::size_t s, std::uint64_t seed);

// Adds i.i.d. N(0, sigma^2) noise in place.
void add_gaussian_noise(HsCube& cube, double sigma, std::uint64_t seed);

}  // namespace tvtv
