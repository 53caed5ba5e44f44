#pragma once

// Dense reference constructions used as oracles. Everything here is built
// from the textbook definitions of the operators, never by calling the
// matrix-free implementations under test.

#include "tvtv/core.hpp"
#include "tvtv/synthetic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

namespace tvtv::testing {

inline HsCube random_cube(std::size_t rows, std::size_t cols, std::size_t bands, std::uint64_t seed, double lo = 0.0,
                          double hi = 1.0) {
    Rng rng(seed);
    std::vector<double> data(rows * cols * bands);
    for (double& v : data) v = rng.uniform(lo, hi);
    return HsCube(rows, cols, bands, std::move(data));
}

inline Eigen::VectorXd to_vector(std::span<const double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) v(static_cast<Eigen::Index>(k)) = values[k];
    return v;
}

inline Eigen::VectorXd to_vector(const HsCube& cube) { return to_vector(cube.data()); }

inline HsCube to_cube(const Eigen::VectorXd& v, std::size_t rows, std::size_t cols, std::size_t bands) {
    return HsCube(rows, cols, bands, std::vector<double>(v.data(), v.data() + v.size()));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
    return acc;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline double max_abs_diff(const HsCube& a, const HsCube& b) { return max_abs_diff(a.data(), b.data()); }

// Row (bi*ocols + bj) averages the B x B block at (bi, bj) of a row-major plane.
inline Eigen::MatrixXd dense_block_average(std::size_t rows, std::size_t cols, std::size_t block) {
    const std::size_t orows = rows / block;
    const std::size_t ocols = cols / block;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(orows * ocols),
                                              static_cast<Eigen::Index>(rows * cols));
    const double w = 1.0 / static_cast<double>(block * block);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            a(static_cast<Eigen::Index>((i / block) * ocols + j / block), static_cast<Eigen::Index>(i * cols + j)) = w;
    return a;
}

// Stacked periodic forward differences: vertical rows first, then horizontal.
inline Eigen::MatrixXd dense_diff(std::size_t rows, std::size_t cols) {
    const std::size_t n = rows * cols;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const auto here = static_cast<Eigen::Index>(i * cols + j);
            const auto down = static_cast<Eigen::Index>(((i + 1) % rows) * cols + j);
            const auto right = static_cast<Eigen::Index>(i * cols + (j + 1) % cols);
            d(here, down) += 1.0;
            d(here, here) -= 1.0;
            d(static_cast<Eigen::Index>(n) + here, right) += 1.0;
            d(static_cast<Eigen::Index>(n) + here, here) -= 1.0;
        }
    return d;
}

// Constraint matrix of X -> A X on the band-major vectorization.
inline Eigen::MatrixXd dense_spatial_constraint(std::size_t rows, std::size_t cols, std::size_t bands,
                                                std::size_t block) {
    const Eigen::MatrixXd a = dense_block_average(rows, cols, block);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a.rows() * static_cast<Eigen::Index>(bands),
                                              a.cols() * static_cast<Eigen::Index>(bands));
    for (std::size_t s = 0; s < bands; ++s) {
        const auto k = static_cast<Eigen::Index>(s);
        c.block(k * a.rows(), k * a.cols(), a.rows(), a.cols()) = a;
    }
    return c;
}

// Constraint matrix of X -> X R: row (c*n + p) reads pixel p of every band.
inline Eigen::MatrixXd dense_spectral_constraint(std::size_t rows, std::size_t cols, const SpectralMatrix& r) {
    const std::size_t n = rows * cols;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r.s() * n),
                                              static_cast<Eigen::Index>(r.s0() * n));
    for (std::size_t ch = 0; ch < r.s(); ++ch)
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t b = 0; b < r.s0(); ++b)
                c(static_cast<Eigen::Index>(ch * n + p), static_cast<Eigen::Index>(b * n + p)) = r(b, ch);
    return c;
}

// Orthonormal basis of the null space of m (columns).
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol = 1e-10) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    const double cutoff = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cutoff) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

// argmin |x - p|^2 s.t. A x = z, x R = y via the dense KKT system
//   [I  C^T] [x]   [p]
//   [C  0  ] [nu] = [d]
// solved in the least-squares sense (C has dependent rows).
inline HsCube kkt_projection(const HsCube& p, const HsCube& z, const HsCube& y, std::size_t block,
                             const SpectralMatrix& r) {
    const Eigen::MatrixXd ca = dense_spatial_constraint(p.rows(), p.cols(), p.bands(), block);
    const Eigen::MatrixXd cr = dense_spectral_constraint(p.rows(), p.cols(), r);
    Eigen::MatrixXd c(ca.rows() + cr.rows(), ca.cols());
    c << ca, cr;
    Eigen::VectorXd d(c.rows());
    d << to_vector(z), to_vector(y);
    const Eigen::Index n = c.cols();
    const Eigen::Index m = c.rows();
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m, n + m);
    kkt.topLeftCorner(n, n).setIdentity();
    kkt.topRightCorner(n, m) = c.transpose();
    kkt.bottomLeftCorner(m, n) = c;
    Eigen::VectorXd rhs(n + m);
    rhs << to_vector(p), d;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    return to_cube(sol.head(n), p.rows(), p.cols(), p.bands());
}

// Projection of p onto E = { x : A x = z, x nearest to {x R = y} among those }.
// Reduces to kkt_projection when the measurements are consistent.
inline HsCube nearest_feasible_projection(const HsCube& p, const HsCube& z, const HsCube& y, std::size_t block,
                                          const SpectralMatrix& r) {
    const Eigen::MatrixXd ca = dense_spatial_constraint(p.rows(), p.cols(), p.bands(), block);
    const Eigen::MatrixXd cr = dense_spectral_constraint(p.rows(), p.cols(), r);
    // dist(x, {xR = y}) = |G (Cr x - y)| with G^T G = (Cr Cr^T)^+ restricted to range(Cr).
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_r(cr, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd_r.singularValues();
    Eigen::MatrixXd g = svd_r.matrixU().transpose();
    for (Eigen::Index k = 0; k < sv.size(); ++k) g.row(k) /= (sv(k) > 1e-12 ? sv(k) : 1.0);
    const Eigen::MatrixXd h = g * cr;
    const Eigen::VectorXd hy = g * to_vector(y);

    const Eigen::VectorXd x0 = ca.completeOrthogonalDecomposition().solve(to_vector(z));
    const Eigen::MatrixXd n = null_space(ca);
    const Eigen::MatrixXd k = h * n;
    const Eigen::VectorXd t0 = k.completeOrthogonalDecomposition().solve(hy - h * x0);
    const Eigen::MatrixXd q = n * null_space(k);
    const Eigen::VectorXd base = x0 + n * t0;
    const Eigen::VectorXd x = base + q * (q.transpose() * (to_vector(p) - base));
    return to_cube(x, p.rows(), p.cols(), p.bands());
}

}  // namespace tvtv::testing
