#pragma once

// Shared fixtures and dense oracles for the unit and acceptance tests.

#include "test_support.hpp"

#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace tvtv::testing {

// Closed-form 32x32x2 pair. The reference value below comes from
// scikit-image structural_similarity(gaussian_weights=True, sigma=1.5,
// use_sample_covariance=False, data_range=1.0), averaged over the bands.
inline std::pair<HsCube, HsCube> ssim_fixture() {
    HsCube gt(32, 32, 2), est(32, 32, 2);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t i = 0; i < 32; ++i)
            for (std::size_t j = 0; j < 32; ++j) {
                const double di = static_cast<double>(i), dj = static_cast<double>(j), ds = static_cast<double>(s);
                const double g = 0.5 + 0.3 * std::sin(0.37 * di + 0.11 * dj + ds) + 0.1 * std::cos(0.23 * dj);
                gt(i, j, s) = g;
                est(i, j, s) = g + 0.08 * std::sin(0.9 * di - 0.4 * dj + 0.5 * ds) * std::cos(0.05 * di * dj);
            }
    return {est, gt};
}

inline constexpr double kSkimageSsim = 0.9310530271044365;

// Dense solve of (rho I + rho D^T D) v = mu + rho x + D^T lambda + rho D^T u.
inline std::vector<double> dense_v_update(std::size_t rows, std::size_t cols, double rho, std::span<const double> u,
                                          std::span<const double> x, std::span<const double> lambda,
                                          std::span<const double> mu) {
    const Eigen::MatrixXd d = testing::dense_diff(rows, cols);
    const auto n = static_cast<Eigen::Index>(rows * cols);
    const Eigen::MatrixXd m = rho * Eigen::MatrixXd::Identity(n, n) + rho * d.transpose() * d;
    const Eigen::VectorXd rhs = testing::to_vector(mu) + rho * testing::to_vector(x) +
                                d.transpose() * testing::to_vector(lambda) + rho * d.transpose() * testing::to_vector(u);
    const Eigen::VectorXd v = m.ldlt().solve(rhs);
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace tvtv::testing
