#pragma once

#include "tvtv/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tvtv {

// Disjoint B x B block averaging (the spatial degradation A). As a matrix
// every row holds B^2 entries equal to 1/B^2 on disjoint supports, so
// A A^T = I / B^2.
class BlockAverage {
public:
    BlockAverage(std::size_t block, std::size_t in_rows, std::size_t in_cols);

    std::size_t block() const noexcept { return block_; }
    std::size_t in_rows() const noexcept { return in_rows_; }
    std::size_t in_cols() const noexcept { return in_cols_; }
    std::size_t out_rows() const noexcept { return in_rows_ / block_; }
    std::size_t out_cols() const noexcept { return in_cols_ / block_; }

    // Single-plane kernels; spans are row-major planes of the in/out grids.
    void apply_plane(std::span<const double> in, std::span<double> out) const;
    void adjoint_plane(std::span<const double> in, std::span<double> out) const;

private:
    std::size_t block_;
    std::size_t in_rows_;
    std::size_t in_cols_;
};

HsCube block_avg_apply(const HsCube& x, const BlockAverage& op);
HsCube block_avg_adjoint(const HsCube& z, const BlockAverage& op);

// Y = X R, pixelwise spectral mixing.
HsCube csr_apply(const HsCube& x, const SpectralMatrix& r);
// X = Y R^T, the adjoint of csr_apply.
HsCube csr_adjoint(const HsCube& y, const SpectralMatrix& r);

// Anisotropic forward differences with periodic wrap.
//   vertical   g[i*cols + j]             = x(i+1 mod rows, j) - x(i, j)
//   horizontal g[rows*cols + i*cols + j] = x(i, j+1 mod cols) - x(i, j)
class TvDiff {
public:
    TvDiff(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t plane_size() const noexcept { return rows_ * cols_; }
    std::size_t gradient_size() const noexcept { return 2 * rows_ * cols_; }

    void apply(std::span<const double> plane, std::span<double> grad) const;
    // Negative periodic divergence.
    void adjoint(std::span<const double> grad, std::span<double> plane) const;

    std::vector<double> apply(std::span<const double> plane) const;
    std::vector<double> adjoint(std::span<const double> grad) const;

    // ||D x||_1 for one plane.
    double norm(std::span<const double> plane) const;

private:
    std::size_t rows_;
    std::size_t cols_;
};

std::vector<double> tv_apply(ConstPlaneView plane, const TvDiff& op);
Plane tv_adjoint(std::span<const double> grad, const TvDiff& op);

// Sum over bands of the anisotropic periodic TV of each band.
double tv_norm(const HsCube& x);

}  // namespace tvtv
