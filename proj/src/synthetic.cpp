#include "tvtv/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tvtv {

namespace {

// a + b sin(2 pi f t + phase) over normalized wavelength t in [0, 1].
std::vector<double> smooth_spectrum(Rng& rng, std::size_t bands) {
    const double offset = rng.uniform(0.25, 0.75);
    const double amplitude = rng.uniform(0.05, 0.2);
    const double freq = rng.uniform(0.3, 1.2);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::vector<double> spectrum(bands);
    for (std::size_t s = 0; s < bands; ++s) {
        const double t = bands > 1 ? static_cast<double>(s) / static_cast<double>(bands - 1) : 0.0;
        spectrum[s] = std::clamp(offset + amplitude * std::sin(2.0 * std::numbers::pi * freq * t + phase), 0.05, 0.95);
    }
    return spectrum;
}

}  // namespace

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

HsCube synthetic_cube(const SyntheticSpec& spec) {
    HsCube cube(spec.rows, spec.cols, spec.bands);
    Rng rng(spec.seed);
    const auto background = smooth_spectrum(rng, spec.bands);
    for (std::size_t s = 0; s < spec.bands; ++s) {
        auto band = cube.band(s);
        std::fill(band.begin(), band.end(), background[s]);
    }
    for (std::size_t k = 0; k < spec.rectangles; ++k) {
        const std::size_t h = 1 + rng.index(std::max<std::size_t>(1, spec.rows / 2));
        const std::size_t w = 1 + rng.index(std::max<std::size_t>(1, spec.cols / 2));
        const std::size_t top = rng.index(spec.rows - std::min(h, spec.rows) + 1);
        const std::size_t left = rng.index(spec.cols - std::min(w, spec.cols) + 1);
        const auto spectrum = smooth_spectrum(rng, spec.bands);
        for (std::size_t s = 0; s < spec.bands; ++s)
            for (std::size_t i = top; i < std::min(top + h, spec.rows); ++i)
                for (std::size_t j = left; j < std::min(left + w, spec.cols); ++j) cube(i, j, s) = spectrum[s];
    }
    return cube;
}

SpectralMatrix random_csr(std::size_t s0, std::size_t s, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<double> entries(s0 * s);
        for (double& e : entries) e = rng.uniform(0.0, 1.0);
        for (std::size_t c = 0; c < s; ++c) {
            double sum = 0.0;
            for (std::size_t b = 0; b < s0; ++b) sum += entries[b * s + c];
            for (std::size_t b = 0; b < s0; ++b) entries[b * s + c] /= sum;
        }
        if (smallest_singular_value(entries, s0, s) > 1e-6) return SpectralMatrix(s0, s, std::move(entries));
    }
    throw Error("random_csr: could not draw a full-rank response");
}

void add_gaussian_noise(HsCube& cube, double sigma, std::uint64_t seed) {
    Rng rng(seed);
    for (double& v : cube.data()) v += sigma * rng.normal();
}

}  // namespace tvtv
