#pragma once

#include <span>

namespace tvtv {

// One element of the u-subproblem:
//   f(u) = |u| + beta*|u - wbar| + c*u + (rho/2)*u^2
// with c = lambda - rho*(Dv) and wbar = (Dw) at that element.
struct ScalarProxProblem {
    double c = 0.0;
    double wbar = 0.0;
    double beta = 1.0;
    double rho = 1.0;
};

double prox_objective(const ScalarProxProblem& p, double u);

// Exact minimizer of prox_objective. f is strictly convex and piecewise
// quadratic with kinks at 0 and wbar; the minimizer is found by comparing
// the clipped stationary point of each of the three smooth pieces with
// the two kinks. Throws tvtv::Error if rho <= 0 or beta < 0.
double scalar_u_min(const ScalarProxProblem& p);

// Elementwise u-update: out[k] = scalar_u_min({lambda[k] - rho*dv[k], wbar[k], beta, rho}).
// All spans must have the same length.
void u_update(std::span<const double> dv, std::span<const double> lambda, std::span<const double> wbar, double beta,
              double rho, std::span<double> out);

}  // namespace tvtv
