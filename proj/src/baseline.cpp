#include "tvtv/baseline.hpp"

#include "tvtv/projection.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tvtv {

namespace {

struct Taps {
    std::array<std::size_t, 4> index;
    std::array<double, 4> weight;
};

// Source taps for each destination coordinate along one axis.
std::vector<Taps> axis_taps(std::size_t in_len, std::size_t factor) {
    std::vector<Taps> taps(in_len * factor);
    const auto last = static_cast<long>(in_len) - 1;
    for (std::size_t d = 0; d < taps.size(); ++d) {
        const double src = (static_cast<double>(d) + 0.5) / static_cast<double>(factor) - 0.5;
        const double base = std::floor(src);
        const double t = src - base;
        for (int k = 0; k < 4; ++k) {
            const long idx = static_cast<long>(base) - 1 + k;
            taps[d].index[k] = static_cast<std::size_t>(std::clamp(idx, 0L, last));
            taps[d].weight[k] = cubic_weight(std::abs(t - static_cast<double>(k - 1)));
        }
    }
    return taps;
}

}  // namespace

double cubic_weight(double x) {
    constexpr double a = -0.5;
    x = std::abs(x);
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

HsCube bicubic_upsample(const HsCube& z, std::size_t factor) {
    if (factor < 1) throw Error("bicubic_upsample: factor must be at least 1");
    if (factor == 1) return z;

    const std::size_t rows = z.rows() * factor;
    const std::size_t cols = z.cols() * factor;
    const auto row_taps = axis_taps(z.rows(), factor);
    const auto col_taps = axis_taps(z.cols(), factor);

    HsCube out(rows, cols, z.bands());
    std::vector<double> horiz(z.rows() * cols);
    for (std::size_t s = 0; s < z.bands(); ++s) {
        auto in = z.band(s);
        for (std::size_t i = 0; i < z.rows(); ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                const Taps& t = col_taps[j];
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += t.weight[k] * in[i * z.cols() + t.index[k]];
                horiz[i * cols + j] = acc;
            }
        }
        auto dst = out.band(s);
        for (std::size_t i = 0; i < rows; ++i) {
            const Taps& t = row_taps[i];
            for (std::size_t j = 0; j < cols; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += t.weight[k] * horiz[t.index[k] * cols + j];
                dst[i * cols + j] = acc;
            }
        }
    }
    return out;
}

HsCube naive_fuse(const HsCube& z, const HsCube& y, const SpectralMatrix& r, std::size_t factor) {
    if (z.bands() != r.s0()) {
        throw DimensionError("naive_fuse: low-resolution cube " + z.shape_string() + " does not have " +
                             std::to_string(r.s0()) + " bands");
    }
    if (y.bands() != r.s() || y.rows() != z.rows() * factor || y.cols() != z.cols() * factor) {
        throw DimensionError("naive_fuse: multispectral cube " + y.shape_string() + " inconsistent with " +
                             z.shape_string() + " at factor " + std::to_string(factor));
    }
    return SpectralProjector(r).project(bicubic_upsample(z, factor), y);
}

}  // namespace tvtv
