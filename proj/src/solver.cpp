#include "tvtv/solver.hpp"

#include "tvtv/parallel.hpp"
#include "tvtv/prox.hpp"

#include <fftw3.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

namespace tvtv {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool all_finite(std::span<const double> values) {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double sum_squares(std::span<const double> values) {
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return acc;
}

}  // namespace

struct PeriodicLaplacianSolver::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

PeriodicLaplacianSolver::PeriodicLaplacianSolver(std::size_t rows, std::size_t cols, double rho)
    : rows_(rows), cols_(cols), rho_(rho), plans_(std::make_unique<Plans>()) {
    if (rows == 0 || cols == 0) throw DimensionError("Laplacian solver needs a non-empty grid");
    if (!(rho > 0.0)) throw Error("Laplacian solver: rho must be positive");

    const std::size_t half = cols / 2 + 1;
    inv_diag_.resize(rows * half);
    const double norm = 1.0 / static_cast<double>(rows * cols);
    for (std::size_t p = 0; p < rows; ++p) {
        const double ev = 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(rows)));
        for (std::size_t q = 0; q < half; ++q) {
            const double eh =
                2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(cols)));
            inv_diag_[p * half + q] = norm / (rho * (1.0 + ev + eh));
        }
    }

    std::vector<double> real(rows * cols);
    std::vector<std::complex<double>> spec(rows * half);
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    const int r = static_cast<int>(rows);
    const int c = static_cast<int>(cols);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_r2c_2d(r, c, real.data(), cplx, flags);
    plans_->backward = fftw_plan_dft_c2r_2d(r, c, cplx, real.data(), flags);
    if (plans_->forward == nullptr || plans_->backward == nullptr) {
        throw Error("FFTW planning failed for " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

PeriodicLaplacianSolver::~PeriodicLaplacianSolver() {
    std::lock_guard lock(planner_mutex());
    if (plans_->forward) fftw_destroy_plan(plans_->forward);
    if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void PeriodicLaplacianSolver::solve(std::span<const double> rhs, std::span<double> out) const {
    const std::size_t n = rows_ * cols_;
    if (rhs.size() != n || out.size() != n) throw DimensionError("Laplacian solve: size mismatch");
    std::vector<double> input(rhs.begin(), rhs.end());
    std::vector<std::complex<double>> spec(inv_diag_.size());
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    fftw_execute_dft_r2c(plans_->forward, input.data(), cplx);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= inv_diag_[k];
    fftw_execute_dft_c2r(plans_->backward, cplx, out.data());
}

SolverState SolverState::initialize(const HsCube& w) {
    SolverState st;
    st.x = w;
    const TvDiff diff(w.rows(), w.cols());
    const std::size_t bands = w.bands();
    st.u.resize(bands);
    st.v.resize(bands);
    st.v_prev.resize(bands);
    st.lambda.resize(bands);
    st.mu.resize(bands);
    st.wbar.resize(bands);
    for (std::size_t s = 0; s < bands; ++s) {
        auto band = w.band(s);
        st.wbar[s] = diff.apply(band);
        st.u[s] = st.wbar[s];
        st.v[s].assign(band.begin(), band.end());
        st.v_prev[s] = st.v[s];
        st.lambda[s].assign(diff.gradient_size(), 0.0);
        st.mu[s].assign(diff.plane_size(), 0.0);
    }
    return st;
}

std::vector<double> v_update(const PeriodicLaplacianSolver& laplacian, const TvDiff& diff,
                             std::span<const double> u, std::span<const double> x, std::span<const double> lambda,
                             std::span<const double> mu) {
    const std::size_t n = diff.plane_size();
    const std::size_t m = diff.gradient_size();
    if (u.size() != m || lambda.size() != m || x.size() != n || mu.size() != n || laplacian.rows() != diff.rows() ||
        laplacian.cols() != diff.cols()) {
        throw DimensionError("v_update: size mismatch");
    }
    const double rho = laplacian.rho();
    std::vector<double> grad(m);
    for (std::size_t k = 0; k < m; ++k) grad[k] = lambda[k] + rho * u[k];
    std::vector<double> rhs = diff.adjoint(grad);
    for (std::size_t k = 0; k < n; ++k) rhs[k] += mu[k] + rho * x[k];
    std::vector<double> v(n);
    laplacian.solve(rhs, v);
    return v;
}

void dual_update(SolverState& state, const TvDiff& diff, double rho) {
    if (!(rho > 0.0)) throw Error("dual_update: rho must be positive");
    std::vector<double> dv(diff.gradient_size());
    for (std::size_t s = 0; s < state.bands(); ++s) {
        diff.apply(state.v[s], dv);
        auto& lam = state.lambda[s];
        const auto& u = state.u[s];
        for (std::size_t k = 0; k < lam.size(); ++k) lam[k] += rho * (u[k] - dv[k]);
        auto& mu = state.mu[s];
        auto xs = state.x.band(s);
        const auto& v = state.v[s];
        for (std::size_t k = 0; k < mu.size(); ++k) mu[k] += rho * (xs[k] - v[k]);
    }
}

Residuals residuals(const SolverState& state, const TvDiff& diff, double rho) {
    if (state.iter < 1) throw Error("residuals: no completed iteration");
    double primal_sq = 0.0;
    double dual_sq = 0.0;
    std::vector<double> dv(diff.gradient_size());
    std::vector<double> step(diff.plane_size());
    for (std::size_t s = 0; s < state.bands(); ++s) {
        const auto& v = state.v[s];
        diff.apply(v, dv);
        const auto& u = state.u[s];
        for (std::size_t k = 0; k < u.size(); ++k) primal_sq += (u[k] - dv[k]) * (u[k] - dv[k]);
        auto xs = state.x.band(s);
        for (std::size_t k = 0; k < v.size(); ++k) primal_sq += (xs[k] - v[k]) * (xs[k] - v[k]);

        const auto& vp = state.v_prev[s];
        for (std::size_t k = 0; k < v.size(); ++k) step[k] = v[k] - vp[k];
        diff.apply(step, dv);
        dual_sq += sum_squares(dv) + sum_squares(step);
    }
    const double scale = std::sqrt(3.0 * static_cast<double>(state.bands() * diff.plane_size()));
    return {std::sqrt(primal_sq) / scale, rho * std::sqrt(dual_sq) / scale};
}

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::Residual: return "residual";
        case StopReason::MaxIters: return "max_iters";
    }
    return "unknown";
}

double tvtv_objective(const HsCube& x, const HsCube& w, double beta) {
    require_same_shape(x, w, "tvtv_objective");
    HsCube diff = x;
    auto dd = diff.data();
    auto wd = w.data();
    for (std::size_t k = 0; k < dd.size(); ++k) dd[k] -= wd[k];
    return tv_norm(x) + beta * tv_norm(diff);
}

SolveResult solve_tvtv(const HsCube& w, const HsCube& z, const HsCube& y, const SpectralMatrix& r,
                       const SolverConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    const BlockAverage a(config.block, w.rows(), w.cols());
    const std::size_t workers = config.parallel_bands ? resolve_workers(config.threads) : 1;
    const JointProjector projector(z, y, a, r,
                                   {config.projection_mode, config.dykstra_iters, config.dykstra_tol, workers});
    const TvDiff diff(w.rows(), w.cols());
    const PeriodicLaplacianSolver laplacian(w.rows(), w.cols(), config.rho);
    const double rho = config.rho;
    const double beta = config.beta;

    SolverState st = SolverState::initialize(w);
    const std::size_t bands = st.bands();
    const std::size_t n = diff.plane_size();

    SolveReport report;
    report.projection_mode = projector.mode();
    report.stop_reason = StopReason::MaxIters;

    std::vector<char> bad(bands, 0);
    auto check = [&](const char* update) {
        for (std::size_t s = 0; s < bands; ++s) {
            if (bad[s]) {
                throw Error(std::string("non-finite iterate produced by the ") + update + " at iteration " +
                            std::to_string(st.iter + 1) + ", band " + std::to_string(s));
            }
        }
    };

    HsCube point(w.rows(), w.cols(), bands);
    for (int it = 0; it < config.max_iters; ++it) {
        parallel_for(bands, workers, [&](std::size_t s) {
            const std::vector<double> dv = diff.apply(st.v[s]);
            u_update(dv, st.lambda[s], st.wbar[s], beta, rho, st.u[s]);
            bad[s] = !all_finite(st.u[s]);
        });
        check("u-update");

        for (std::size_t s = 0; s < bands; ++s) {
            auto p = point.band(s);
            const auto& v = st.v[s];
            const auto& mu = st.mu[s];
            for (std::size_t k = 0; k < n; ++k) p[k] = v[k] - mu[k] / rho;
        }
        st.x = projector.project(point);
        if (!all_finite(st.x.data())) {
            throw Error("non-finite iterate produced by the X-update at iteration " + std::to_string(st.iter + 1));
        }

        parallel_for(bands, workers, [&](std::size_t s) {
            st.v_prev[s].swap(st.v[s]);
            st.v[s] = v_update(laplacian, diff, st.u[s], st.x.band(s), st.lambda[s], st.mu[s]);
            bad[s] = !all_finite(st.v[s]);
        });
        check("v-update");

        dual_update(st, diff, rho);
        ++st.iter;

        const Residuals res = residuals(st, diff, rho);
        if (!std::isfinite(res.primal) || !std::isfinite(res.dual)) {
            throw Error("non-finite iterate produced by the dual update at iteration " + std::to_string(st.iter));
        }
        st.primal_res.push_back(res.primal);
        st.dual_res.push_back(res.dual);
        if (res.primal < config.residual_tol || res.dual < config.residual_tol) {
            report.stop_reason = StopReason::Residual;
            break;
        }
    }

    HsCube x = projector.project(st.x);
    if (config.clamp_output) x = clamp01(x);

    report.iterations = st.iter;
    report.final_primal_res = st.primal_res.empty() ? 0.0 : st.primal_res.back();
    report.final_dual_res = st.dual_res.empty() ? 0.0 : st.dual_res.back();
    report.primal_history = std::move(st.primal_res);
    report.dual_history = std::move(st.dual_res);
    report.objective = tvtv_objective(x, w, beta);
    report.constraint_res_a = projector.residual_a(x);
    report.constraint_res_r = projector.residual_r(x);
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(x), std::move(report)};
}

}  // namespace tvtv
