#include "tvtv/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace tvtv {

namespace {

constexpr std::size_t kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

std::array<double, kWindow> gaussian_taps() {
    std::array<double, kWindow> g{};
    double sum = 0.0;
    const double center = static_cast<double>(kWindow / 2);
    for (std::size_t k = 0; k < kWindow; ++k) {
        const double d = static_cast<double>(k) - center;
        g[k] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
        sum += g[k];
    }
    for (double& v : g) v /= sum;
    return g;
}

// Valid-region separable Gaussian filter of a rows x cols plane.
std::vector<double> filter_valid(std::span<const double> in, std::size_t rows, std::size_t cols,
                                 const std::array<double, kWindow>& g) {
    const std::size_t orows = rows - kWindow + 1;
    const std::size_t ocols = cols - kWindow + 1;
    std::vector<double> tmp(rows * ocols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < ocols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kWindow; ++k) acc += g[k] * in[i * cols + j + k];
            tmp[i * ocols + j] = acc;
        }
    std::vector<double> out(orows * ocols);
    for (std::size_t i = 0; i < orows; ++i)
        for (std::size_t j = 0; j < ocols; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kWindow; ++k) acc += g[k] * tmp[(i + k) * ocols + j];
            out[i * ocols + j] = acc;
        }
    return out;
}

double band_mse(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

}  // namespace

double rmse(const HsCube& estimate, const HsCube& truth) {
    require_same_shape(estimate, truth, "rmse");
    auto a = estimate.data();
    auto b = truth.data();
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = kPeak * (a[k] - b[k]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

double psnr(const HsCube& estimate, const HsCube& truth) {
    require_same_shape(estimate, truth, "psnr");
    double total = 0.0;
    for (std::size_t s = 0; s < truth.bands(); ++s) {
        const double mse = kPeak * kPeak * band_mse(estimate.band(s), truth.band(s));
        const double value = mse > 0.0 ? 10.0 * std::log10(kPeak * kPeak / mse) : kPsnrCap;
        total += std::min(value, kPsnrCap);
    }
    return total / static_cast<double>(truth.bands());
}

double ssim(const HsCube& estimate, const HsCube& truth) {
    require_same_shape(estimate, truth, "ssim");
    if (truth.rows() < kWindow || truth.cols() < kWindow) {
        throw DimensionError("ssim needs bands of at least 11x11, got " + truth.shape_string());
    }
    const auto g = gaussian_taps();
    const std::size_t rows = truth.rows();
    const std::size_t cols = truth.cols();
    const std::size_t n = truth.plane_size();
    std::vector<double> xx(n), yy(n), xy(n);
    double total = 0.0;
    for (std::size_t s = 0; s < truth.bands(); ++s) {
        auto x = estimate.band(s);
        auto y = truth.band(s);
        for (std::size_t k = 0; k < n; ++k) {
            xx[k] = x[k] * x[k];
            yy[k] = y[k] * y[k];
            xy[k] = x[k] * y[k];
        }
        const auto mx = filter_valid(x, rows, cols, g);
        const auto my = filter_valid(y, rows, cols, g);
        const auto exx = filter_valid(xx, rows, cols, g);
        const auto eyy = filter_valid(yy, rows, cols, g);
        const auto exy = filter_valid(xy, rows, cols, g);
        double band_sum = 0.0;
        for (std::size_t k = 0; k < mx.size(); ++k) {
            const double sxx = exx[k] - mx[k] * mx[k];
            const double syy = eyy[k] - my[k] * my[k];
            const double sxy = exy[k] - mx[k] * my[k];
            const double num = (2.0 * mx[k] * my[k] + kC1) * (2.0 * sxy + kC2);
            const double den = (mx[k] * mx[k] + my[k] * my[k] + kC1) * (sxx + syy + kC2);
            band_sum += num / den;
        }
        total += band_sum / static_cast<double>(mx.size());
    }
    return total / static_cast<double>(truth.bands());
}

double sam(const HsCube& estimate, const HsCube& truth) {
    require_same_shape(estimate, truth, "sam");
    const std::size_t n = truth.plane_size();
    auto a = estimate.data();
    auto b = truth.data();
    double total = 0.0;
    std::size_t counted = 0;
    std::vector<double> ua(truth.bands()), ub(truth.bands());
    for (std::size_t p = 0; p < n; ++p) {
        double na = 0.0, nb = 0.0;
        for (std::size_t s = 0; s < truth.bands(); ++s) {
            ua[s] = a[s * n + p];
            ub[s] = b[s * n + p];
            na += ua[s] * ua[s];
            nb += ub[s] * ub[s];
        }
        na = std::sqrt(na);
        nb = std::sqrt(nb);
        if (na < 1e-12 || nb < 1e-12) continue;
        // 2 atan2(|a - b|, |a + b|) on the unit vectors; unlike acos of the
        // cosine it stays accurate near zero angle.
        double diff = 0.0, sum = 0.0;
        for (std::size_t s = 0; s < truth.bands(); ++s) {
            const double x = ua[s] / na;
            const double y = ub[s] / nb;
            diff += (x - y) * (x - y);
            sum += (x + y) * (x + y);
        }
        total += 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
        ++counted;
    }
    if (counted == 0) throw Error("sam: every pixel has a zero spectrum");
    return total / static_cast<double>(counted) * 180.0 / std::numbers::pi;
}

double ergas(const HsCube& estimate, const HsCube& truth, double ratio) {
    require_same_shape(estimate, truth, "ergas");
    if (!(ratio > 0.0)) throw Error("ergas: scale ratio must be positive");
    double acc = 0.0;
    for (std::size_t s = 0; s < truth.bands(); ++s) {
        auto y = truth.band(s);
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(y.size());
        if (mean == 0.0) throw Error("ergas: ground-truth band " + std::to_string(s) + " has zero mean");
        acc += band_mse(estimate.band(s), y) / (mean * mean);
    }
    return 100.0 / ratio * std::sqrt(acc / static_cast<double>(truth.bands()));
}

MetricsRecord evaluate(const HsCube& estimate, const HsCube& truth, double ergas_ratio) {
    return {psnr(estimate, truth), ssim(estimate, truth), sam(estimate, truth), ergas(estimate, truth, ergas_ratio),
            rmse(estimate, truth)};
}

}  // namespace tvtv
