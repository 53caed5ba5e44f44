#include "tvtv/operators.hpp"

#include <cmath>

namespace tvtv {

BlockAverage::BlockAverage(std::size_t block, std::size_t in_rows, std::size_t in_cols)
    : block_(block), in_rows_(in_rows), in_cols_(in_cols) {
    if (block == 0) {
        throw DimensionError("block size must be positive");
    }
    if (in_rows == 0 || in_cols == 0 || in_rows % block != 0 || in_cols % block != 0) {
        throw DimensionError("image " + std::to_string(in_rows) + "x" + std::to_string(in_cols) +
                             " is not divisible into " + std::to_string(block) + "x" + std::to_string(block) +
                             " blocks");
    }
}

void BlockAverage::apply_plane(std::span<const double> in, std::span<double> out) const {
    const std::size_t orows = out_rows();
    const std::size_t ocols = out_cols();
    const double scale = 1.0 / static_cast<double>(block_ * block_);
    for (std::size_t bi = 0; bi < orows; ++bi) {
        for (std::size_t bj = 0; bj < ocols; ++bj) {
            double sum = 0.0;
            for (std::size_t di = 0; di < block_; ++di) {
                const double* row = in.data() + (bi * block_ + di) * in_cols_ + bj * block_;
                for (std::size_t dj = 0; dj < block_; ++dj) sum += row[dj];
            }
            out[bi * ocols + bj] = sum * scale;
        }
    }
}

void BlockAverage::adjoint_plane(std::span<const double> in, std::span<double> out) const {
    const std::size_t ocols = out_cols();
    const double scale = 1.0 / static_cast<double>(block_ * block_);
    for (std::size_t i = 0; i < in_rows_; ++i) {
        const std::size_t bi = i / block_;
        for (std::size_t j = 0; j < in_cols_; ++j) {
            out[i * in_cols_ + j] = in[bi * ocols + j / block_] * scale;
        }
    }
}

HsCube block_avg_apply(const HsCube& x, const BlockAverage& op) {
    if (x.rows() != op.in_rows() || x.cols() != op.in_cols()) {
        throw DimensionError("block average expects " + std::to_string(op.in_rows()) + "x" +
                             std::to_string(op.in_cols()) + " input, got " + x.shape_string());
    }
    HsCube z(op.out_rows(), op.out_cols(), x.bands());
    for (std::size_t s = 0; s < x.bands(); ++s) op.apply_plane(x.band(s), z.band(s));
    return z;
}

HsCube block_avg_adjoint(const HsCube& z, const BlockAverage& op) {
    if (z.rows() != op.out_rows() || z.cols() != op.out_cols()) {
        throw DimensionError("block average adjoint expects " + std::to_string(op.out_rows()) + "x" +
                             std::to_string(op.out_cols()) + " input, got " + z.shape_string());
    }
    HsCube x(op.in_rows(), op.in_cols(), z.bands());
    for (std::size_t s = 0; s < z.bands(); ++s) op.adjoint_plane(z.band(s), x.band(s));
    return x;
}

HsCube csr_apply(const HsCube& x, const SpectralMatrix& r) {
    if (x.bands() != r.s0()) {
        throw DimensionError("spectral response expects " + std::to_string(r.s0()) + " bands, got " +
                             x.shape_string());
    }
    const std::size_t n = x.plane_size();
    HsCube y(x.rows(), x.cols(), r.s());
    for (std::size_t c = 0; c < r.s(); ++c) {
        auto out = y.band(c);
        for (std::size_t s = 0; s < r.s0(); ++s) {
            const double w = r(s, c);
            if (w == 0.0) continue;
            auto in = x.band(s);
            for (std::size_t p = 0; p < n; ++p) out[p] += w * in[p];
        }
    }
    return y;
}

HsCube csr_adjoint(const HsCube& y, const SpectralMatrix& r) {
    if (y.bands() != r.s()) {
        throw DimensionError("spectral response adjoint expects " + std::to_string(r.s()) + " channels, got " +
                             y.shape_string());
    }
    const std::size_t n = y.plane_size();
    HsCube x(y.rows(), y.cols(), r.s0());
    for (std::size_t s = 0; s < r.s0(); ++s) {
        auto out = x.band(s);
        for (std::size_t c = 0; c < r.s(); ++c) {
            const double w = r(s, c);
            if (w == 0.0) continue;
            auto in = y.band(c);
            for (std::size_t p = 0; p < n; ++p) out[p] += w * in[p];
        }
    }
    return x;
}

TvDiff::TvDiff(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw DimensionError("difference operator needs a non-empty grid");
}

void TvDiff::apply(std::span<const double> x, std::span<double> g) const {
    if (x.size() != plane_size() || g.size() != gradient_size()) {
        throw DimensionError("difference operator size mismatch");
    }
    const std::size_t n = plane_size();
    for (std::size_t i = 0; i < rows_; ++i) {
        const std::size_t down = (i + 1 == rows_) ? 0 : i + 1;
        for (std::size_t j = 0; j < cols_; ++j) {
            const std::size_t right = (j + 1 == cols_) ? 0 : j + 1;
            const double here = x[i * cols_ + j];
            g[i * cols_ + j] = x[down * cols_ + j] - here;
            g[n + i * cols_ + j] = x[i * cols_ + right] - here;
        }
    }
}

void TvDiff::adjoint(std::span<const double> g, std::span<double> x) const {
    if (x.size() != plane_size() || g.size() != gradient_size()) {
        throw DimensionError("difference adjoint size mismatch");
    }
    const std::size_t n = plane_size();
    for (std::size_t i = 0; i < rows_; ++i) {
        const std::size_t up = (i == 0) ? rows_ - 1 : i - 1;
        for (std::size_t j = 0; j < cols_; ++j) {
            const std::size_t left = (j == 0) ? cols_ - 1 : j - 1;
            x[i * cols_ + j] = (g[up * cols_ + j] - g[i * cols_ + j]) + (g[n + i * cols_ + left] - g[n + i * cols_ + j]);
        }
    }
}

std::vector<double> TvDiff::apply(std::span<const double> plane) const {
    std::vector<double> g(gradient_size());
    apply(plane, g);
    return g;
}

std::vector<double> TvDiff::adjoint(std::span<const double> grad) const {
    std::vector<double> x(plane_size());
    adjoint(grad, x);
    return x;
}

double TvDiff::norm(std::span<const double> x) const {
    if (x.size() != plane_size()) throw DimensionError("difference operator size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        const std::size_t down = (i + 1 == rows_) ? 0 : i + 1;
        for (std::size_t j = 0; j < cols_; ++j) {
            const std::size_t right = (j + 1 == cols_) ? 0 : j + 1;
            const double here = x[i * cols_ + j];
            total += std::abs(x[down * cols_ + j] - here) + std::abs(x[i * cols_ + right] - here);
        }
    }
    return total;
}

std::vector<double> tv_apply(ConstPlaneView plane, const TvDiff& op) {
    if (plane.rows != op.rows() || plane.cols != op.cols()) {
        throw DimensionError("tv_apply: plane is " + std::to_string(plane.rows) + "x" + std::to_string(plane.cols) +
                             ", operator expects " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()));
    }
    return op.apply(plane.values);
}

Plane tv_adjoint(std::span<const double> grad, const TvDiff& op) {
    if (grad.size() != op.gradient_size()) {
        throw DimensionError("tv_adjoint: gradient length " + std::to_string(grad.size()) + ", expected " +
                             std::to_string(op.gradient_size()));
    }
    return Plane(op.rows(), op.cols(), op.adjoint(grad));
}

double tv_norm(const HsCube& x) {
    const TvDiff d(x.rows(), x.cols());
    double total = 0.0;
    for (std::size_t s = 0; s < x.bands(); ++s) total += d.norm(x.band(s));
    return total;
}

}  // namespace tvtv
