#pragma once

#include "tvtv/core.hpp"
#include "tvtv/operators.hpp"
#include "tvtv/projection.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tvtv {

// Solves (rho I + rho D^T D) v = rhs for periodic anisotropic differences D.
// D^T D is block circulant, so the 2D DFT diagonalizes it with eigenvalues
//   2(1 - cos(2 pi p / rows)) + 2(1 - cos(2 pi q / cols)).
// solve() may be called concurrently from several threads.
class PeriodicLaplacianSolver {
public:
    PeriodicLaplacianSolver(std::size_t rows, std::size_t cols, double rho);
    ~PeriodicLaplacianSolver();
    PeriodicLaplacianSolver(const PeriodicLaplacianSolver&) = delete;
    PeriodicLaplacianSolver& operator=(const PeriodicLaplacianSolver&) = delete;

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double rho() const noexcept { return rho_; }

    void solve(std::span<const double> rhs, std::span<double> out) const;

private:
    struct Plans;
    std::size_t rows_;
    std::size_t cols_;
    double rho_;
    std::vector<double> inv_diag_;  // 1 / (rho (1 + eig)), half spectrum, scaled by 1/(rows*cols)
    std::unique_ptr<Plans> plans_;
};

// Per-band ADMM variables. Gradient-domain vectors (u, lambda, wbar) have
// length 2*rows*cols; image-domain vectors (v, mu) have rows*cols.
struct SolverState {
    HsCube x;
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> v;
    std::vector<std::vector<double>> v_prev;
    std::vector<std::vector<double>> lambda;
    std::vector<std::vector<double>> mu;
    std::vector<std::vector<double>> wbar;
    int iter = 0;
    std::vector<double> primal_res;
    std::vector<double> dual_res;

    std::size_t bands() const noexcept { return u.size(); }

    // X = V = W, u = wbar = D w, lambda = mu = 0.
    static SolverState initialize(const HsCube& w);
};

// Right-hand side mu + rho x + D^T lambda + rho D^T u, then the FFT solve.
std::vector<double> v_update(const PeriodicLaplacianSolver& laplacian, const TvDiff& diff,
                             std::span<const double> u, std::span<const double> x, std::span<const double> lambda,
                             std::span<const double> mu);

// lambda_s += rho (u_s - D v_s); mu_s += rho (x_s - v_s) for every band.
void dual_update(SolverState& state, const TvDiff& diff, double rho);

struct Residuals {
    double primal = 0.0;
    double dual = 0.0;
};

// RMS-normalized residuals of the current state:
//   primal = sqrt(sum_s |u_s - D v_s|^2 + |x_s - v_s|^2) / sqrt(3 S0 M0 N0)
//   dual   = rho sqrt(sum_s |D dv_s|^2 + |dv_s|^2) / sqrt(3 S0 M0 N0), dv = v - v_prev
// Throws before the first completed iteration.
Residuals residuals(const SolverState& state, const TvDiff& diff, double rho);

enum class StopReason { Residual, MaxIters };
const char* to_string(StopReason reason);

struct SolveReport {
    int iterations = 0;
    double final_primal_res = 0.0;
    double final_dual_res = 0.0;
    double objective = 0.0;
    double constraint_res_a = 0.0;
    double constraint_res_r = 0.0;
    double wall_time = 0.0;
    StopReason stop_reason = StopReason::MaxIters;
    ProjectionMode projection_mode = ProjectionMode::Exact;
    std::vector<double> primal_history;
    std::vector<double> dual_history;
};

struct SolveResult {
    HsCube x;
    SolveReport report;
};

// TV(X) + beta TV(X - W).
double tvtv_objective(const HsCube& x, const HsCube& w, double beta);

// ADMM for min TV(X) + beta TV(X - W) s.t. AX = Z, XR = Y, where A is block
// averaging with factor config.block. Each iteration runs the u-update,
// the joint projection for X, the v-update and the dual updates, and stops
// once the primal or the dual residual drops below config.residual_tol.
// The returned cube is re-projected, so it satisfies the constraints
// whatever the stop reason.
SolveResult solve_tvtv(const HsCube& w, const HsCube& z, const HsCube& y, const SpectralMatrix& r,
                       const SolverConfig& config);

}  // namespace tvtv
