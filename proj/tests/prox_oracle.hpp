#pragma once

// Brute-force minimizer for the scalar u-subproblem: dense grid search over
// a bracket guaranteed to contain the minimizer, then golden-section
// refinement around the best grid point. Independent of the candidate
// enumeration used by scalar_u_min.

#include <algorithm>
#include <cmath>

namespace tvtv::testing {

struct ProxInstance {
    double c, wbar, beta, rho;
};

inline double prox_f(const ProxInstance& p, double u) {
    return std::abs(u) + p.beta * std::abs(u - p.wbar) + p.c * u + 0.5 * p.rho * u * u;
}

inline double grid_golden_min(const ProxInstance& p, int grid_points = 4001) {
    // |u*| <= (1 + beta + |c|) / rho from the optimality condition.
    const double bound = (1.0 + p.beta + std::abs(p.c)) / p.rho + std::abs(p.wbar) + 1.0;
    const double h = 2.0 * bound / (grid_points - 1);
    double best_u = -bound;
    double best_f = prox_f(p, best_u);
    for (int k = 1; k < grid_points; ++k) {
        const double u = -bound + h * k;
        const double f = prox_f(p, u);
        if (f < best_f) {
            best_f = f;
            best_u = u;
        }
    }
    double lo = best_u - h;
    double hi = best_u + h;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = prox_f(p, x1);
    double f2 = prox_f(p, x2);
    for (int it = 0; it < 300 && hi - lo > 0.0; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = prox_f(p, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = prox_f(p, x2);
        }
    }
    // The kinks are where golden-section is least precise; keep the best of
    // the refined point and the kinks that fall inside the bracket.
    double u = 0.5 * (lo + hi);
    for (double kink : {0.0, p.wbar}) {
        if (kink >= best_u - h && kink <= best_u + h && prox_f(p, kink) < prox_f(p, u)) u = kink;
    }
    return u;
}

}  // namespace tvtv::testing
