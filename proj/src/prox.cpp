#include "tvtv/prox.hpp"

#include "tvtv/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace tvtv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Stationary point of the smooth piece with fixed subgradient signs,
// clipped into [lo, hi].
double clipped_stationary(double sign_u, double sign_uw, const ScalarProxProblem& p, double lo, double hi) {
    const double u = -(sign_u + p.beta * sign_uw + p.c) / p.rho;
    return std::clamp(u, lo, hi);
}

}  // namespace

double prox_objective(const ScalarProxProblem& p, double u) {
    return std::abs(u) + p.beta * std::abs(u - p.wbar) + p.c * u + 0.5 * p.rho * u * u;
}

double scalar_u_min(const ScalarProxProblem& p) {
    if (!(p.rho > 0.0)) throw Error("scalar_u_min: rho must be positive");
    if (!(p.beta >= 0.0)) throw Error("scalar_u_min: beta must be nonnegative");

    const double lo = std::min(0.0, p.wbar);
    const double hi = std::max(0.0, p.wbar);
    const double mid = 0.5 * (lo + hi);

    std::array<double, 5> candidates{
        clipped_stationary(-1.0, -1.0, p, -kInf, lo),
        clipped_stationary(1.0, 1.0, p, hi, kInf),
        // Middle piece: signs of u and u - wbar are those at the midpoint.
        // When wbar == 0 the piece is empty and this collapses onto 0.
        clipped_stationary(sign_of(mid), sign_of(mid - p.wbar), p, lo, hi),
        0.0,
        p.wbar,
    };

    double best = candidates[0];
    double best_f = prox_objective(p, best);
    for (std::size_t k = 1; k < candidates.size(); ++k) {
        const double f = prox_objective(p, candidates[k]);
        if (f < best_f) {
            best_f = f;
            best = candidates[k];
        }
    }
    return best;
}

void u_update(std::span<const double> dv, std::span<const double> lambda, std::span<const double> wbar, double beta,
              double rho, std::span<double> out) {
    const std::size_t n = out.size();
    if (dv.size() != n || lambda.size() != n || wbar.size() != n) {
        throw DimensionError("u_update: vector lengths differ");
    }
    if (!(rho > 0.0)) throw Error("u_update: rho must be positive");
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = scalar_u_min({lambda[k] - rho * dv[k], wbar[k], beta, rho});
    }
}

}  // namespace tvtv
